//! Exhaustive ground truth for small instances: every matching, and every
//! election between two of them.

use crate::error::{Error, Result};
use crate::instance::{ApplicantId, Instance, Matching, PostPolicy};

/// Size limits for enumeration. The defaults keep the worst case around
/// 10⁷ matchings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_applicants: usize,
    pub max_posts: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_applicants: 8,
            max_posts: 8,
        }
    }
}

impl Guard {
    pub fn unlimited() -> Self {
        Guard {
            max_applicants: usize::MAX,
            max_posts: usize::MAX,
        }
    }

    pub fn check(&self, inst: &Instance) -> Result<()> {
        if inst.num_applicants() > self.max_applicants || inst.num_posts() > self.max_posts {
            return Err(Error::GuardExceeded(format!(
                "instance is {}x{}, enumeration is limited to {}x{}",
                inst.num_applicants(),
                inst.num_posts(),
                self.max_applicants,
                self.max_posts
            )));
        }
        Ok(())
    }
}

/// Calls `visit` once for every matching of `inst`, the empty one included.
/// Applicants are branched in id order, unmatched first, then by rank.
pub fn for_each_matching<F>(inst: &Instance, guard: Guard, mut visit: F) -> Result<()>
where
    F: FnMut(&Matching),
{
    guard.check(inst)?;
    let mut m = Matching::empty(inst.num_applicants(), inst.num_posts());
    recurse(inst, 0, &mut m, &mut visit);
    Ok(())
}

fn recurse<F: FnMut(&Matching)>(inst: &Instance, a: usize, m: &mut Matching, visit: &mut F) {
    if a == inst.num_applicants() {
        visit(m);
        return;
    }
    recurse(inst, a + 1, m, visit);
    for &b in inst.prefs(ApplicantId(a)) {
        if m.applicant_of(b).is_none() {
            m.set(ApplicantId(a), b);
            recurse(inst, a + 1, m, visit);
            m.unset(ApplicantId(a));
        }
    }
}

pub fn enumerate_matchings(inst: &Instance) -> Result<Vec<Matching>> {
    enumerate_matchings_guarded(inst, Guard::default())
}

pub fn enumerate_matchings_guarded(inst: &Instance, guard: Guard) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_matching(inst, guard, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Per-vertex satisfaction: larger is better, equal means indifferent.
/// Applicants first, then posts.
fn satisfaction(inst: &Instance, m: &Matching) -> Vec<u32> {
    const TOP: u32 = u32::MAX / 2;
    let mut s = Vec::with_capacity(inst.num_applicants() + inst.num_posts());
    for a in inst.applicants() {
        s.push(m.post_of(a).map_or(0, |b| {
            TOP - inst.prefs(a).iter().position(|&p| p == b).expect("edge") as u32
        }));
    }
    for b in inst.posts() {
        s.push(match (m.applicant_of(b), inst.policy(b)) {
            (None, _) => 0,
            (Some(_), PostPolicy::SingleTie) => TOP,
            (Some(a), PostPolicy::Strict(list)) => {
                TOP - list.iter().position(|&x| x == a).expect("edge") as u32
            }
        });
    }
    s
}

/// (vertices preferring `x`, vertices preferring `y`).
fn election(x: &[u32], y: &[u32]) -> (usize, usize) {
    x.iter().zip(y).fold((0, 0), |(fx, fy), (p, q)| match p.cmp(q) {
        std::cmp::Ordering::Greater => (fx + 1, fy),
        std::cmp::Ordering::Less => (fx, fy + 1),
        std::cmp::Ordering::Equal => (fx, fy),
    })
}

/// φ(M, M′) and φ(M′, M) by direct vertex-by-vertex comparison.
pub fn brute_score(inst: &Instance, m: &Matching, other: &Matching) -> (usize, usize) {
    election(&satisfaction(inst, m), &satisfaction(inst, other))
}

/// Unpopularity margin of `m` by trying every matching of the instance.
pub fn brute_margin(inst: &Instance, m: &Matching) -> Result<i64> {
    brute_margin_guarded(inst, m, Guard::default())
}

pub fn brute_margin_guarded(inst: &Instance, m: &Matching, guard: Guard) -> Result<i64> {
    m.validate(inst)?;
    let base = satisfaction(inst, m);
    let mut best = 0i64;
    for_each_matching(inst, guard, |other| {
        let (for_m, for_other) = election(&base, &satisfaction(inst, other));
        best = best.max(for_other as i64 - for_m as i64);
    })?;
    Ok(best)
}

/// All popular matchings: those that no matching beats in a head-to-head
/// election.
pub fn popular_set(inst: &Instance) -> Result<Vec<Matching>> {
    popular_set_guarded(inst, Guard::default())
}

pub fn popular_set_guarded(inst: &Instance, guard: Guard) -> Result<Vec<Matching>> {
    let all = enumerate_matchings_guarded(inst, guard)?;
    let sat: Vec<Vec<u32>> = all.iter().map(|m| satisfaction(inst, m)).collect();
    Ok(all
        .into_iter()
        .zip(&sat)
        .filter(|(_, s)| {
            sat.iter().all(|t| {
                let (for_m, for_other) = election(s, t);
                for_other <= for_m
            })
        })
        .map(|(m, _)| m)
        .collect())
}

/// Brute-force margins of every matching, in enumeration order.
pub fn all_margins(inst: &Instance, guard: Guard) -> Result<Vec<(Matching, i64)>> {
    let all = enumerate_matchings_guarded(inst, guard)?;
    let sat: Vec<Vec<u32>> = all.iter().map(|m| satisfaction(inst, m)).collect();
    Ok(all
        .into_iter()
        .zip(&sat)
        .map(|(m, s)| {
            let worst = sat
                .iter()
                .map(|t| {
                    let (for_m, for_other) = election(s, t);
                    for_other as i64 - for_m as i64
                })
                .max()
                .unwrap_or(0);
            (m, worst)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::PostId;
    use crate::verifier;

    fn ties(nb: usize, prefs: &[&[usize]]) -> Instance {
        Instance::with_ties(
            nb,
            prefs.iter().map(|l| l.iter().map(|&b| PostId(b)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_matchings(&ties(1, &[&[0]])).unwrap().len(), 2);
        let k22 = ties(2, &[&[0, 1], &[1, 0]]);
        assert_eq!(enumerate_matchings(&k22).unwrap().len(), 7);
        // three applicants over b1 > b2 (> b3): 1 + 7 + 10 + 2 matchings by
        // size 0..3, counted by hand
        let tl = ties(3, &[&[0, 1], &[0, 1], &[0, 1, 2]]);
        assert_eq!(enumerate_matchings(&tl).unwrap().len(), 1 + 7 + 10 + 2);
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let inst = ties(3, &[&[0, 1, 2], &[2, 1], &[1, 0]]);
        let all = enumerate_matchings(&inst).unwrap();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn guard() {
        let prefs: Vec<Vec<PostId>> = (0..9).map(|_| vec![PostId(0)]).collect();
        let inst = Instance::with_ties(1, prefs).unwrap();
        assert!(matches!(enumerate_matchings(&inst), Err(Error::GuardExceeded(_))));
        assert!(enumerate_matchings_guarded(&inst, Guard::unlimited()).is_ok());
    }

    #[test]
    fn bottom_left_has_no_popular_matching() {
        let bl = ties(3, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        assert!(popular_set(&bl).unwrap().is_empty());
    }

    #[test]
    fn brute_score_matches_verifier_score() {
        let inst = ties(3, &[&[0, 1, 2], &[2, 1], &[1, 0]]);
        let all = enumerate_matchings(&inst).unwrap();
        for m in &all {
            for o in &all {
                assert_eq!(brute_score(&inst, m, o), verifier::score(&inst, m, o).unwrap());
            }
        }
    }
}
