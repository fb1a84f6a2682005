//! The product condition on a row-sufficient predictive rule
//! `π(j | T_i, i)`: for all `u`, `v`,
//! `π(u|T_i)·π(v|T_i + e_u) = π(v|T_i)·π(u|T_i + e_v)`.

use super::{CheckReport, Witness, WitnessDetail};
use crate::enumerate::Strings;
use crate::rational::Rational;
use crate::space::{StateId, StateSpace};

/// Count vectors probed: every row with entries in `0..=max_entry`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearProbe {
    pub max_entry: u64,
}

impl Default for LinearProbe {
    fn default() -> Self {
        LinearProbe { max_entry: 5 }
    }
}

/// Checks the product condition for `pi(j, row, i)` at every state `i`, every
/// probed row and every pair `u < v`.
pub fn check_linear_condition<F>(pi: F, space: &StateSpace, probe: LinearProbe) -> CheckReport
where
    F: Fn(StateId, &[u64], StateId) -> Rational,
{
    let mut report = CheckReport::new("linear", 0);
    let k = space.len();
    let base = probe.max_entry as usize + 1;
    for i in space.ids() {
        for digits in Strings::new(base, k) {
            let row: Vec<u64> = digits.iter().map(|d| d.0 as u64).collect();
            report.count("rows", 1);
            for u in 0..k {
                for v in u + 1..k {
                    report.count("pairs", 1);
                    let (su, sv) = (StateId(u as u32), StateId(v as u32));
                    let mut plus_u = row.clone();
                    plus_u[u] += 1;
                    let mut plus_v = row.clone();
                    plus_v[v] += 1;
                    let left = pi(su, &row, i) * pi(sv, &plus_u, i);
                    let right = pi(sv, &row, i) * pi(su, &plus_v, i);
                    if left != right {
                        report.push(Witness {
                            kind: "linear".into(),
                            detail: WitnessDetail::Linear {
                                i,
                                u: su,
                                v: sv,
                                row: row.clone(),
                            },
                            left_value: left,
                            right_value: right,
                        });
                    }
                }
            }
        }
    }
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_count, int, ratio};
    use crate::schemes::{hoppe_pi, HoppeParams};

    #[test]
    fn hoppe_rule_satisfies_the_product_condition() {
        let sp = StateSpace::integers(3).unwrap();
        let p = HoppeParams::common(
            &sp,
            ratio(3, 2),
            vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)],
        )
        .unwrap();
        let r = check_linear_condition(
            |j, row, i| hoppe_pi(&p, j, row, i),
            &sp,
            LinearProbe::default(),
        );
        assert!(r.holds());
        assert_eq!(r.coverage["rows"], 3 * 216);
    }

    #[test]
    fn squared_rule_is_rejected() {
        let sp = StateSpace::integers(3).unwrap();
        let pi = |j: StateId, row: &[u64], _i: StateId| {
            let w = |k: usize| {
                let a = ratio(1, 3) + from_count(row[k]);
                &a * &a
            };
            let total = (0..row.len()).fold(int(0), |acc, k| acc + w(k));
            w(j.index()) / total
        };
        let r = check_linear_condition(pi, &sp, LinearProbe { max_entry: 2 });
        assert!(r.is_violated());
        let w = &r.witnesses[0];
        if let WitnessDetail::Linear { i, u, v, row } = &w.detail {
            let mut pu = row.clone();
            pu[u.index()] += 1;
            let mut pv = row.clone();
            pv[v.index()] += 1;
            assert_eq!(pi(*u, row, *i) * pi(*v, &pu, *i), w.left_value);
            assert_eq!(pi(*v, row, *i) * pi(*u, &pv, *i), w.right_value);
            assert_ne!(w.left_value, w.right_value);
        } else {
            panic!("unexpected witness");
        }
    }
}
