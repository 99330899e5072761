//! The case table: what to do when at least two witness paths end at the
//! vertex `w` that was just added to the clique.
//!
//! Terminal indices are 0-based positions in the parent configuration. The
//! child's removed set is always derived the same way: the interiors of the
//! detached paths, plus `w` unless it is a child terminal, plus every parent
//! terminal the child does not list.

use super::config::ConfigId;

/// A terminal of the child configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermRef {
    /// Parent terminal by index.
    U(usize),
    /// The added vertex.
    W,
}

/// One reassembly action, applied after the child realization is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    /// `w` becomes a new branch vertex joined to the listed parent terminals
    /// by their detached paths.
    AddW(Vec<usize>),
    /// `w` is already a branch vertex; add the detached paths of the listed terminals.
    Spokes(Vec<usize>),
    /// The two detached paths, glued at `w`, become a pattern edge `u_i u_j`.
    Concat(usize, usize),
    /// The child's `u_0 - w` edge is continued along the detached path of
    /// terminal `i`, turning it into a `u_0 - u_i` edge; `w` stops being a branch.
    ExtendSpoke(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub child: Option<(ConfigId, Vec<TermRef>)>,
    pub parts: Vec<Part>,
}

fn leaf(parts: Vec<Part>) -> Plan {
    Plan { child: None, parts }
}

fn child(id: ConfigId, terms: Vec<TermRef>, parts: Vec<Part>) -> Plan {
    Plan {
        child: Some((id, terms)),
        parts,
    }
}

use Part::*;
use TermRef::{U, W};

/// Looks up the row for `id` with `t` terminals when the detached paths come
/// from the terminals in `hit` (sorted, at least two). `None` means the row
/// does not exist, which the unavoidability argument rules out.
pub fn plan(id: ConfigId, hit: &[usize]) -> Option<Plan> {
    let k = hit.len();
    let t = id.terminal_count();
    if k < 2 || hit.iter().any(|&i| i >= t) || hit.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let missing = |set: &[usize]| -> Vec<usize> { (0..t).filter(|i| !set.contains(i)).collect() };
    let all = |n: usize| -> Vec<TermRef> { (0..n).map(U).collect() };
    let plan = match id {
        ConfigId::CPath => leaf(vec![Concat(0, 1)]),
        ConfigId::CMader(1) | ConfigId::C1(1) => leaf(vec![AddW(vec![0, 1])]),
        ConfigId::CMader(d) => child(ConfigId::CMader(d - 1), all(2), vec![AddW(vec![0, 1])]),
        ConfigId::C1(d) => child(
            ConfigId::C2(d - 1),
            vec![U(0), U(1), W],
            vec![Spokes(vec![0, 1])],
        ),
        ConfigId::C2(d) => {
            if k == 3 {
                if d == 1 {
                    leaf(vec![AddW(vec![0, 1, 2])])
                } else {
                    child(ConfigId::C2(d - 1), all(3), vec![AddW(vec![0, 1, 2])])
                }
            } else {
                let c = missing(hit)[0];
                let (a, b) = (hit[0], hit[1]);
                if d == 1 {
                    child(ConfigId::CPath, vec![U(c), W], vec![Spokes(vec![a, b])])
                } else {
                    child(
                        ConfigId::C3(d - 1),
                        vec![U(c), W, U(a)],
                        vec![Spokes(vec![a, b])],
                    )
                }
            }
        }
        ConfigId::C3(d) => match hit {
            [0, 1, 2] if d == 1 => {
                child(ConfigId::CPath, vec![U(0), U(1)], vec![AddW(vec![0, 1, 2])])
            }
            [0, 1, 2] => child(ConfigId::C3(d - 1), all(3), vec![AddW(vec![0, 1, 2])]),
            [0, 1] => child(ConfigId::C2(d), all(3), vec![Concat(0, 1)]),
            [1, 2] => child(
                ConfigId::C4(d - 1, 3),
                vec![U(0), U(1), W],
                vec![Spokes(vec![1, 2])],
            ),
            [0, 2] => child(
                ConfigId::C4(d - 1, 3),
                vec![U(1), U(0), W],
                vec![Spokes(vec![0, 2])],
            ),
            _ => return None,
        },
        ConfigId::C4(0, t) => {
            if hit[0] == 0 {
                let i = hit[1];
                if t == 3 {
                    child(ConfigId::CPath, vec![U(0), U(3 - i)], vec![Concat(0, i)])
                } else {
                    let rest = (0..t).filter(|&j| j != i).map(U).collect();
                    child(ConfigId::C4(0, t - 1), rest, vec![Concat(0, i)])
                }
            } else {
                let i = hit[0];
                let mut terms: Vec<TermRef> = (0..t).filter(|&j| j != i).map(U).collect();
                terms.push(W);
                child(ConfigId::C4(0, t), terms, vec![ExtendSpoke(i)])
            }
        }
        ConfigId::C4(d, t) => {
            if k >= 3 {
                child(
                    ConfigId::C4(d - 1, t),
                    all(t),
                    vec![AddW(hit[..3].to_vec())],
                )
            } else if hit[0] == 0 {
                let i = hit[1];
                if t == 3 {
                    child(
                        ConfigId::C3(d),
                        vec![U(0), U(3 - i), U(i)],
                        vec![Concat(0, i)],
                    )
                } else {
                    let rest = (0..t).filter(|&j| j != i).map(U).collect();
                    child(ConfigId::C4(d, t - 1), rest, vec![Concat(0, i)])
                }
            } else {
                let mut terms = all(t);
                terms.push(W);
                child(
                    ConfigId::C4(d - 1, t + 1),
                    terms,
                    vec![Spokes(hit.to_vec())],
                )
            }
        }
        ConfigId::C5 => child(ConfigId::C6, vec![U(0), U(1), W], vec![Spokes(vec![0, 1])]),
        ConfigId::C6 => {
            if k == 3 {
                child(
                    ConfigId::C7,
                    vec![U(0), W, U(1)],
                    vec![Spokes(vec![0, 1, 2])],
                )
            } else {
                let c = missing(hit)[0];
                child(
                    ConfigId::C8,
                    vec![U(c), W, U((c + 1) % 3)],
                    vec![Spokes(hit.to_vec())],
                )
            }
        }
        ConfigId::C7 => match hit {
            [0, 1, 2] => child(
                ConfigId::C2(1),
                vec![U(0), U(1), W],
                vec![Spokes(vec![0, 1, 2])],
            ),
            [0, 1] => child(
                ConfigId::C9,
                vec![U(0), U(1), W, U(2)],
                vec![Spokes(vec![0, 1])],
            ),
            [a, 2] => child(
                ConfigId::C3(1),
                vec![U(1 - a), W, U(*a)],
                vec![Spokes(hit.to_vec())],
            ),
            _ => return None,
        },
        ConfigId::C8 => match hit {
            [0, 1, 2] => child(
                ConfigId::C3(1),
                vec![U(0), U(1), W],
                vec![Spokes(vec![0, 1, 2])],
            ),
            [0, 1] => child(ConfigId::C7, all(3), vec![Concat(0, 1)]),
            [a, 2] => child(
                ConfigId::C4(1, 3),
                vec![U(1 - a), U(*a), W],
                vec![Spokes(hit.to_vec())],
            ),
            _ => return None,
        },
        ConfigId::C9 => match k {
            4 => leaf(vec![AddW(vec![0, 1, 2, 3])]),
            3 => {
                let i = missing(hit)[0];
                child(ConfigId::CPath, vec![U(i), W], vec![Spokes(hit.to_vec())])
            }
            _ if hit == [2, 3] => child(ConfigId::C2(1), all(3), vec![Concat(2, 3)]),
            _ => {
                let out = missing(hit);
                child(
                    ConfigId::C4(0, 3),
                    vec![W, U(out[0]), U(out[1])],
                    vec![Spokes(hit.to_vec())],
                )
            }
        },
        ConfigId::C10(_) | ConfigId::C11(_) | ConfigId::C12(_) | ConfigId::C13(_) => return None,
    };
    Some(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_concatenates() {
        assert_eq!(
            plan(ConfigId::CPath, &[0, 1]),
            Some(leaf(vec![Concat(0, 1)]))
        );
    }

    #[test]
    fn c2_two_paths_goes_to_c3_with_w_second() {
        let p = plan(ConfigId::C2(3), &[0, 1]).unwrap();
        assert_eq!(p.child, Some((ConfigId::C3(2), vec![U(2), W, U(0)])));
        let p = plan(ConfigId::C2(3), &[1, 2]).unwrap();
        assert_eq!(p.child, Some((ConfigId::C3(2), vec![U(0), W, U(1)])));
    }

    #[test]
    fn c3_rows() {
        assert_eq!(
            plan(ConfigId::C3(2), &[1, 2]).unwrap().child,
            Some((ConfigId::C4(1, 3), vec![U(0), U(1), W]))
        );
        assert_eq!(
            plan(ConfigId::C3(2), &[0, 2]).unwrap().child,
            Some((ConfigId::C4(1, 3), vec![U(1), U(0), W]))
        );
        assert_eq!(
            plan(ConfigId::C3(1), &[0, 1, 2]).unwrap().child,
            Some((ConfigId::CPath, vec![U(0), U(1)]))
        );
    }

    #[test]
    fn c4_fan_rows() {
        // u1 among the hits: glue u1..w..u_i; the child keeps the other terminals.
        let p = plan(ConfigId::C4(0, 4), &[0, 2]).unwrap();
        assert_eq!(p.child, Some((ConfigId::C4(0, 3), vec![U(0), U(1), U(3)])));
        assert_eq!(p.parts, vec![Concat(0, 2)]);
        let p = plan(ConfigId::C4(0, 3), &[0, 1]).unwrap();
        assert_eq!(p.child, Some((ConfigId::CPath, vec![U(0), U(2)])));
        // u1 not hit: w replaces u_i as a fan target.
        let p = plan(ConfigId::C4(0, 3), &[1, 2]).unwrap();
        assert_eq!(p.child, Some((ConfigId::C4(0, 3), vec![U(0), U(2), W])));
        assert_eq!(p.parts, vec![ExtendSpoke(1)]);
    }

    #[test]
    fn c4_positive_rows() {
        assert_eq!(
            plan(ConfigId::C4(2, 3), &[0, 1]).unwrap().child,
            Some((ConfigId::C3(2), vec![U(0), U(2), U(1)]))
        );
        assert_eq!(
            plan(ConfigId::C4(2, 4), &[1, 3]).unwrap().child,
            Some((ConfigId::C4(1, 5), vec![U(0), U(1), U(2), U(3), W]))
        );
        assert_eq!(
            plan(ConfigId::C4(2, 4), &[1, 2, 3]).unwrap().parts,
            vec![AddW(vec![1, 2, 3])]
        );
    }

    #[test]
    fn c6_rotates_terminals() {
        for (hit, terms) in [
            ([0, 1], vec![U(2), W, U(0)]),
            ([1, 2], vec![U(0), W, U(1)]),
            ([0, 2], vec![U(1), W, U(2)]),
        ] {
            assert_eq!(
                plan(ConfigId::C6, &hit).unwrap().child,
                Some((ConfigId::C8, terms))
            );
        }
    }

    #[test]
    fn c9_rows() {
        assert_eq!(
            plan(ConfigId::C9, &[2, 3]).unwrap().child,
            Some((ConfigId::C2(1), vec![U(0), U(1), U(2)]))
        );
        assert_eq!(
            plan(ConfigId::C9, &[0, 3]).unwrap().child,
            Some((ConfigId::C4(0, 3), vec![W, U(1), U(2)]))
        );
        assert_eq!(
            plan(ConfigId::C9, &[0, 1, 3]).unwrap().child,
            Some((ConfigId::CPath, vec![U(2), W]))
        );
        assert!(plan(ConfigId::C9, &[0, 1, 2, 3]).unwrap().child.is_none());
    }

    #[test]
    fn malformed_hits_have_no_row() {
        assert_eq!(plan(ConfigId::C7, &[0]), None);
        assert_eq!(plan(ConfigId::C7, &[1, 0]), None);
        assert_eq!(plan(ConfigId::C5, &[0, 2]), None);
        assert_eq!(plan(ConfigId::C13(1), &[0, 1]), None);
    }
}
