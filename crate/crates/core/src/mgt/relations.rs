//! Functoriality of the reduction maps along chains of divisors.

use std::collections::BTreeSet;

use super::{check_modulus, closure_bounded, t_qp, u_qp, MgtElement, MgtError, Residue};

/// Outcome of checking `x_{q,p} . x_{s,q} = x_{s,p}` over all chains `p | q | s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub chains_checked: usize,
    pub failure: Option<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn divisors(s: u32) -> impl Iterator<Item = u32> {
    (1..=s).filter(move |d| s.is_multiple_of(*d))
}

/// Checks `t_{q,p}(t_{s,q}(a)) = t_{s,p}(a)` for every `s` accepted by
/// `tops`, every chain `p | q | s` and every residue `a mod s`.
pub fn check_t_relations(tops: impl IntoIterator<Item = u32>) -> Result<RelationReport, MgtError> {
    let mut chains = 0;
    for s in tops {
        if s == 0 {
            return Err(MgtError::OutOfRange { q: 0, min: 1, max: u32::MAX });
        }
        for q in divisors(s) {
            for p in divisors(q) {
                chains += 1;
                for a in 0..s {
                    let a = Residue::new(a, s)?;
                    let two_step = t_qp(t_qp(a, q)?, p)?;
                    if two_step != t_qp(a, p)? {
                        return Ok(RelationReport {
                            chains_checked: chains,
                            failure: Some(format!("t fails on {p} | {q} | {s} at {}", a.value())),
                        });
                    }
                }
            }
        }
    }
    Ok(RelationReport { chains_checked: chains, failure: None })
}

/// Checks `u_{q,p}(u_{s,q}(e)) = u_{s,p}(e)` for every `s` accepted by
/// `tops`, every chain `p | q | s` with `p >= 2` and every `e` in `mGT_s`.
pub fn check_u_relations(tops: impl IntoIterator<Item = u32>, max_q: u32) -> Result<RelationReport, MgtError> {
    let mut chains = 0;
    for s in tops {
        check_modulus(s, max_q)?;
        let group = closure_bounded(s, max_q)?;
        for q in divisors(s).filter(|&q| q >= 2) {
            for p in divisors(q).filter(|&p| p >= 2) {
                chains += 1;
                for e in &group {
                    if u_qp(&u_qp(e, q)?, p)? != u_qp(e, p)? {
                        return Ok(RelationReport {
                            chains_checked: chains,
                            failure: Some(format!("u fails on {p} | {q} | {s} at {e}")),
                        });
                    }
                }
            }
        }
    }
    Ok(RelationReport { chains_checked: chains, failure: None })
}

/// Sizes attached to `u_{q,p}: mGT_q -> mGT_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionStats {
    pub q: u32,
    pub p: u32,
    pub source_order: usize,
    pub target_order: usize,
    pub kernel: usize,
    pub image: usize,
}

impl ProjectionStats {
    pub fn is_surjective(&self) -> bool {
        self.image == self.target_order
    }
}

pub fn projection_stats(q: u32, p: u32, max_q: u32) -> Result<ProjectionStats, MgtError> {
    let source = closure_bounded(q, max_q)?;
    let target = closure_bounded(p, max_q)?;
    let images = source.iter().map(|e| u_qp(e, p)).collect::<Result<Vec<MgtElement>, _>>()?;
    let identity = MgtElement::identity(p);
    Ok(ProjectionStats {
        q,
        p,
        source_order: source.len(),
        target_order: target.len(),
        kernel: images.iter().filter(|e| **e == identity).count(),
        image: images.iter().collect::<BTreeSet<_>>().len(),
    })
}
