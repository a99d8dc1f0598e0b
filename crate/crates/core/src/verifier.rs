//! Exact popularity test and unpopularity margin.
//!
//! The margin of M is the largest Σ_v vote_v(M′(v), M(v)) over all matchings
//! M′. Each vertex's vote depends only on its own partner in M′, so the sum
//! splits into one term per M′ edge (both endpoints' votes) plus −1 for every
//! M-matched vertex that M′ leaves unmatched. That is a maximum-weight
//! bipartite matching problem once the unmatched terms are folded into the
//! edge weights.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::Result;
use crate::instance::{ApplicantId, Instance, Matching, PostId, Vertex};

/// φ(M, M′) and φ(M′, M): how many vertices prefer each side.
pub fn score(inst: &Instance, m: &Matching, other: &Matching) -> Result<(usize, usize)> {
    m.validate(inst)?;
    other.validate(inst)?;
    let mut for_m = 0;
    let mut for_other = 0;
    let vertices = inst
        .applicants()
        .map(Vertex::Applicant)
        .chain(inst.posts().map(Vertex::Post));
    for v in vertices {
        match inst.vote(v, m.partner(v), other.partner(v))?.value() {
            1 => for_m += 1,
            -1 => for_other += 1,
            _ => {}
        }
    }
    Ok((for_m, for_other))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginReport {
    /// max over M′ of φ(M′, M) − φ(M, M′); never negative.
    pub margin: i64,
    /// A matching attaining the margin (M itself when the margin is 0).
    pub witness: Matching,
}

pub fn margin(inst: &Instance, m: &Matching) -> Result<MarginReport> {
    m.validate(inst)?;
    let na = inst.num_applicants();
    let nb = inst.num_posts();
    if na == 0 {
        return Ok(MarginReport {
            margin: 0,
            witness: m.clone(),
        });
    }

    // u(v) = 1 when v is matched in M. Vertex v contributes
    //   vote_v(M′(v), M(v))   if matched in M′
    //   -u(v)                 otherwise
    // so the objective equals
    //   Σ_{(a,b) ∈ M′} [vote_a + vote_b + u(a) + u(b)] − Σ_v u(v).
    // The bracket is the shifted weight below (range −2..=4); only this
    // shift and the final subtraction turn weights into a margin.
    let matched_a = |a: ApplicantId| i64::from(m.post_of(a).is_some());
    let matched_b = |b: PostId| i64::from(m.applicant_of(b).is_some());
    let total_u = 2 * m.len() as i64;

    // Rows are applicants. Columns are the real posts followed by one
    // "stay unmatched" slot per applicant, all of weight 0.
    let forbidden = -8 * (na + nb) as i64 - 8;
    let mut weights = Matrix::new(na, nb + na, 0i64);
    for a in inst.applicants() {
        for b in inst.posts() {
            weights[(a.0, b.0)] = forbidden;
        }
        for &b in inst.prefs(a) {
            let va = inst.applicant_vote(a, Some(b), m.post_of(a))?.value() as i64;
            let vb = inst.post_vote(b, Some(a), m.applicant_of(b))?.value() as i64;
            weights[(a.0, b.0)] = va + vb + matched_a(a) + matched_b(b);
        }
    }
    let (best, columns) = kuhn_munkres(&weights);
    let pairs: Vec<(ApplicantId, PostId)> = columns
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c < nb)
        .map(|(a, &c)| (ApplicantId(a), PostId(c)))
        .collect();
    debug_assert!(pairs.iter().all(|&(a, b)| inst.has_edge(a, b)));
    let witness = Matching::from_pairs(inst, pairs)?;
    let mut margin = best - total_u;
    // ties may hand back a different optimum than M; prefer M itself at 0
    let witness = if margin <= 0 {
        margin = 0;
        m.clone()
    } else {
        witness
    };
    Ok(MarginReport { margin, witness })
}

pub fn is_popular(inst: &Instance, m: &Matching) -> Result<bool> {
    Ok(margin(inst, m)?.margin == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::PostPolicy;

    fn ties(nb: usize, prefs: &[&[usize]]) -> Instance {
        Instance::with_ties(
            nb,
            prefs.iter().map(|l| l.iter().map(|&b| PostId(b)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identical_matchings_score_zero() {
        let inst = ties(3, &[&[0, 1], &[0, 1], &[0, 1, 2]]);
        let m = Matching::from_index_pairs(&inst, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(score(&inst, &m, &m).unwrap(), (0, 0));
    }

    #[test]
    fn single_edge_votes() {
        let inst = ties(1, &[&[0]]);
        let empty = Matching::empty(1, 1);
        let full = Matching::from_index_pairs(&inst, &[(0, 0)]).unwrap();
        assert_eq!(score(&inst, &empty, &full).unwrap(), (0, 2));
        assert_eq!(score(&inst, &full, &empty).unwrap(), (2, 0));
        let rep = margin(&inst, &empty).unwrap();
        assert_eq!(rep.margin, 2);
        assert_eq!(rep.witness, full);
        assert!(is_popular(&inst, &full).unwrap());
    }

    #[test]
    fn witness_rescores_to_margin() {
        let inst = ties(3, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        let m = Matching::from_index_pairs(&inst, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let rep = margin(&inst, &m).unwrap();
        assert!(rep.margin >= 1);
        let (for_m, for_w) = score(&inst, &m, &rep.witness).unwrap();
        assert_eq!(for_w as i64 - for_m as i64, rep.margin);
    }

    #[test]
    fn strict_posts_vote_by_rank() {
        // b0 ranks a1 over a0; a0 only has b0, a1 prefers b1
        let inst = Instance::new(
            vec![vec![PostId(0)], vec![PostId(1), PostId(0)]],
            vec![
                PostPolicy::Strict(vec![ApplicantId(1), ApplicantId(0)]),
                PostPolicy::SingleTie,
            ],
        )
        .unwrap();
        let stable = Matching::from_index_pairs(&inst, &[(0, 0), (1, 1)]).unwrap();
        assert!(is_popular(&inst, &stable).unwrap());
    }

    #[test]
    fn rejects_foreign_matching() {
        let inst = ties(1, &[&[0]]);
        assert!(margin(&inst, &Matching::empty(2, 1)).is_err());
    }
}
