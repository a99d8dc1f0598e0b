//! O(n²) popular-matching algorithm for instances whose posts are all
//! single ties.
//!
//! Posts are split into three classes X, Y and Z, starting from X = F (the
//! first-choice posts), Y = B \ F, Z = ∅. Each round builds a helper graph H
//! in which every applicant has degree at most 2:
//!
//! 1. applicants outside nbr(Z) whose first choice is in X get that edge;
//! 2. X posts left isolated move to Y;
//! 3. every applicant gets an edge to its favourite Y post if that post is
//!    ranked no worse than its first non-first-choice post;
//! 4. Y posts that are even in H move to Z; a round without such a post is
//!    the last one.
//!
//! Afterwards applicants in nbr(Z) get an edge to their favourite Z post,
//! and applicants whose whole neighbourhood lies in X get an edge to a
//! private last-resort post. The instance admits a popular matching iff H
//! has a matching covering every applicant.

use std::fmt;

use crate::dm::{self, BipartiteGraph, BipartiteMatching, DmLabel};
use crate::error::{Error, Result};
use crate::instance::{ApplicantId, Instance, Matching, PostId, Rank, Vote};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PostClass {
    X,
    Y,
    Z,
}

impl fmt::Display for PostClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PostClass::X => "X",
            PostClass::Y => "Y",
            PostClass::Z => "Z",
        })
    }
}

/// Final ⟨X, Y, Z⟩ split of the real posts plus the dummy set D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class: Vec<PostClass>,
    dummies: Vec<ApplicantId>,
}

impl Partition {
    pub fn class_of(&self, b: PostId) -> PostClass {
        self.class[b.0]
    }

    pub fn posts_in(&self, class: PostClass) -> Vec<PostId> {
        self.class
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(b, _)| PostId(b))
            .collect()
    }

    pub fn x(&self) -> Vec<PostId> {
        self.posts_in(PostClass::X)
    }

    pub fn y(&self) -> Vec<PostId> {
        self.posts_in(PostClass::Y)
    }

    pub fn z(&self) -> Vec<PostId> {
        self.posts_in(PostClass::Z)
    }

    /// Applicants owning a last-resort post in D (those with rₐ = ∞).
    pub fn dummies(&self) -> &[ApplicantId] {
        &self.dummies
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HelperPost {
    Real(PostId),
    /// The last-resort post ℓ(a).
    LastResort(ApplicantId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Top,
    Y,
    Z,
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HelperEdge {
    pub applicant: ApplicantId,
    pub post: HelperPost,
    pub kind: EdgeKind,
}

/// The final helper graph H. Right-side vertices are the real posts followed
/// by one dummy per entry of [`Partition::dummies`].
#[derive(Debug, Clone)]
pub struct HelperGraph {
    num_posts: usize,
    edges: Vec<HelperEdge>,
    dummy_slot: Vec<Option<usize>>,
    dummy_owner: Vec<ApplicantId>,
    graph: BipartiteGraph,
}

impl HelperGraph {
    fn new(inst: &Instance, edges: Vec<HelperEdge>, dummies: &[ApplicantId]) -> Self {
        let num_posts = inst.num_posts();
        let mut dummy_slot = vec![None; inst.num_applicants()];
        for (k, a) in dummies.iter().enumerate() {
            dummy_slot[a.0] = Some(k);
        }
        let mut g = HelperGraph {
            num_posts,
            edges,
            dummy_slot,
            dummy_owner: dummies.to_vec(),
            graph: BipartiteGraph::new(0, 0, []).expect("empty graph"),
        };
        let pairs: Vec<_> = g.edges.iter().map(|e| (e.applicant.0, g.right_index(e.post))).collect();
        g.graph = BipartiteGraph::new(inst.num_applicants(), num_posts + dummies.len(), pairs)
            .expect("helper edges are distinct");
        g
    }

    fn right_index(&self, p: HelperPost) -> usize {
        match p {
            HelperPost::Real(b) => b.0,
            HelperPost::LastResort(a) => {
                self.num_posts + self.dummy_slot[a.0].expect("dummy exists for applicant")
            }
        }
    }

    fn post_at(&self, v: usize) -> HelperPost {
        if v < self.num_posts {
            HelperPost::Real(PostId(v))
        } else {
            HelperPost::LastResort(self.dummy_owner[v - self.num_posts])
        }
    }

    pub fn edges(&self) -> &[HelperEdge] {
        &self.edges
    }

    /// Edges to real posts as (applicant, post) pairs, sorted.
    pub fn real_edges(&self) -> Vec<(ApplicantId, PostId)> {
        let mut v: Vec<_> = self
            .edges
            .iter()
            .filter_map(|e| match e.post {
                HelperPost::Real(b) => Some((e.applicant, b)),
                HelperPost::LastResort(_) => None,
            })
            .collect();
        v.sort();
        v
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn degree(&self, a: ApplicantId) -> usize {
        self.graph.left_degree(a.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationRecord {
    /// Posts demoted from X to Y in step 2.
    pub x_to_y: Vec<PostId>,
    /// Posts demoted from Y to Z in step 4.
    pub y_to_z: Vec<PostId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveTrace {
    pub iterations: Vec<IterationRecord>,
    /// Elementary steps performed (edge scans, vertex visits). Grows as
    /// O(n²) in the instance size.
    pub work: u64,
}

impl SolveTrace {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }
}

pub fn iteration_count(trace: &SolveTrace) -> usize {
    trace.iteration_count()
}

/// Candidate post tracked per applicant: (rank, post).
type Cursor = Option<(usize, PostId)>;

/// Runs the partitioning loop and builds the final helper graph.
pub fn build_helper(inst: &Instance) -> Result<(HelperGraph, Partition, SolveTrace)> {
    if let Some(b) = inst.posts().find(|&b| !inst.policy(b).is_tie()) {
        return Err(Error::ModelViolation(b.0));
    }
    if inst.num_posts() == 0 {
        return Err(Error::NoPosts);
    }
    let na = inst.num_applicants();
    let nb = inst.num_posts();
    let f_mask = inst.f_mask();
    let r: Vec<Rank> = inst.applicants().map(|a| inst.r_rank_with(a, &f_mask)).collect();
    // finite r_a, or "past the end of the list" for r_a = ∞
    let r_limit: Vec<usize> = inst
        .applicants()
        .map(|a| r[a.0].finite().unwrap_or(inst.prefs(a).len() + 1))
        .collect();

    let mut class: Vec<PostClass> = f_mask
        .iter()
        .map(|&f| if f { PostClass::X } else { PostClass::Y })
        .collect();
    let mut x_posts: Vec<PostId> = inst.posts().filter(|b| f_mask[b.0]).collect();
    let mut in_nbr_z = vec![false; na];

    // favourite Y post within rank r_a; initially the post at rank r_a
    let mut best_y: Vec<Cursor> = inst
        .applicants()
        .map(|a| r[a.0].finite().map(|k| (k, inst.prefs(a)[k - 1])))
        .collect();
    let mut best_z: Vec<Cursor> = vec![None; na];

    let mut trace = SolveTrace::default();
    let mut work: u64 = (inst.num_edges() + na + nb) as u64;
    let mut top_count = vec![0usize; nb];
    let mut edges: Vec<HelperEdge>;

    loop {
        let mut record = IterationRecord::default();
        edges = Vec::with_capacity(2 * na);

        // step 1
        for a in inst.applicants() {
            let f = inst.f_post(a);
            if !in_nbr_z[a.0] && class[f.0] == PostClass::X {
                edges.push(HelperEdge {
                    applicant: a,
                    post: HelperPost::Real(f),
                    kind: EdgeKind::Top,
                });
                top_count[f.0] += 1;
            }
        }
        work += na as u64;

        // step 2
        work += x_posts.len() as u64;
        x_posts.retain(|&b| {
            if top_count[b.0] > 0 {
                return true;
            }
            class[b.0] = PostClass::Y;
            record.x_to_y.push(b);
            for &a in inst.post_neighbours(b) {
                let rank = inst.applicant_rank(a, b).expect("edge");
                if rank <= r_limit[a.0] && best_y[a.0].is_none_or(|(k, _)| rank < k) {
                    best_y[a.0] = Some((rank, b));
                }
            }
            work += inst.post_neighbours(b).len() as u64;
            false
        });
        for &b in &x_posts {
            top_count[b.0] = 0;
        }

        // step 3
        for a in inst.applicants() {
            if let Some((_, b)) = best_y[a.0] {
                debug_assert_eq!(class[b.0], PostClass::Y);
                edges.push(HelperEdge {
                    applicant: a,
                    post: HelperPost::Real(b),
                    kind: EdgeKind::Y,
                });
            }
        }
        work += na as u64;

        // step 4
        let h = BipartiteGraph::new(na, nb, edges.iter().map(|e| match e.post {
            HelperPost::Real(b) => (e.applicant.0, b.0),
            HelperPost::LastResort(_) => unreachable!("dummies only appear after the loop"),
        }))
        .expect("helper edges are distinct");
        let m = dm::max_matching_deg2(&h).expect("applicant degree is at most 2 in H");
        let labels = dm::classify(&h, &m).expect("matching is maximum");
        work += (na + nb + h.num_edges()) as u64 * 2;

        for b in inst.posts() {
            if class[b.0] == PostClass::Y && labels.right(b.0) == DmLabel::Even {
                record.y_to_z.push(b);
            }
        }
        for &b in &record.y_to_z {
            class[b.0] = PostClass::Z;
            for &a in inst.post_neighbours(b) {
                in_nbr_z[a.0] = true;
                let rank = inst.applicant_rank(a, b).expect("edge");
                if best_z[a.0].is_none_or(|(k, _)| rank < k) {
                    best_z[a.0] = Some((rank, b));
                }
                if best_y[a.0].is_some_and(|(_, p)| p == b) {
                    // next Y post within rank r_a, if any
                    let list = inst.prefs(a);
                    best_y[a.0] = (rank + 1..=r_limit[a.0].min(list.len()))
                        .find(|&k| class[list[k - 1].0] == PostClass::Y)
                        .map(|k| (k, list[k - 1]));
                    work += (r_limit[a.0].min(list.len()) + 1 - rank) as u64;
                }
            }
            work += inst.post_neighbours(b).len() as u64;
        }

        let done = record.y_to_z.is_empty();
        trace.iterations.push(record);
        if done {
            break;
        }
    }

    // phase II
    for a in inst.applicants() {
        if in_nbr_z[a.0] {
            let (_, b) = best_z[a.0].expect("applicant in nbr(Z) has a Z neighbour");
            edges.push(HelperEdge {
                applicant: a,
                post: HelperPost::Real(b),
                kind: EdgeKind::Z,
            });
        }
    }

    // phase III
    let dummies: Vec<ApplicantId> = inst.applicants().filter(|a| r[a.0] == Rank::Infinity).collect();
    for &a in &dummies {
        if inst.prefs(a).iter().all(|b| class[b.0] == PostClass::X) {
            edges.push(HelperEdge {
                applicant: a,
                post: HelperPost::LastResort(a),
                kind: EdgeKind::Dummy,
            });
        }
    }
    work += 2 * na as u64;
    trace.work = work;

    let helper = HelperGraph::new(inst, edges, &dummies);
    Ok((helper, Partition { class, dummies }, trace))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Popular(Matching),
    NoPopularMatching,
}

impl Outcome {
    pub fn matching(&self) -> Option<&Matching> {
        match self {
            Outcome::Popular(m) => Some(m),
            Outcome::NoPopularMatching => None,
        }
    }

    pub fn is_popular(&self) -> bool {
        matches!(self, Outcome::Popular(_))
    }
}

/// Everything the solver computed for one instance.
#[derive(Debug, Clone)]
pub struct Solution {
    pub outcome: Outcome,
    pub helper: HelperGraph,
    pub partition: Partition,
    pub trace: SolveTrace,
    /// Pairs of the maximum matching of H, last-resort pairs included.
    pub helper_matching: Vec<(ApplicantId, HelperPost)>,
}

/// Decides whether `inst` admits a popular matching and returns one if so.
pub fn solve(inst: &Instance) -> Result<Outcome> {
    solve_detailed(inst).map(|s| s.outcome)
}

pub fn solve_detailed(inst: &Instance) -> Result<Solution> {
    let (helper, partition, mut trace) = build_helper(inst)?;
    let g = helper.graph();
    let na = inst.num_applicants();

    // maximum matching on the real X ∪ Y posts first, so that augmenting
    // with Z and dummy edges keeps all of them matched
    let restricted = BipartiteGraph::new(
        na,
        g.right(),
        helper.edges().iter().filter_map(|e| match e.post {
            HelperPost::Real(b) if partition.class_of(b) != PostClass::Z => {
                Some((e.applicant.0, b.0))
            }
            _ => None,
        }),
    )
    .expect("subgraph of H");
    let base = dm::max_matching_deg2(&restricted).expect("applicant degree is at most 2 in H");
    let mut m = BipartiteMatching::from_pairs(g, base.pairs()).expect("restricted edges are in H");
    trace.work += (restricted.num_edges() + na) as u64;
    trace.work += dm::augment(g, &mut m) as u64;

    let helper_matching: Vec<(ApplicantId, HelperPost)> = m
        .pairs()
        .map(|(u, v)| (ApplicantId(u), helper.post_at(v)))
        .collect();
    let outcome = if m.len() == na {
        let projected = Matching::from_pairs(
            inst,
            helper_matching.iter().filter_map(|&(a, p)| match p {
                HelperPost::Real(b) => Some((a, b)),
                HelperPost::LastResort(_) => None,
            }),
        )
        .expect("H edges to real posts are edges of the instance");
        Outcome::Popular(projected)
    } else {
        Outcome::NoPopularMatching
    };
    Ok(Solution {
        outcome,
        helper,
        partition,
        trace,
        helper_matching,
    })
}

/// An edge contradicting the sign structure a solver matching must have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignViolation {
    pub applicant: ApplicantId,
    pub post: PostId,
    pub label: Vote,
    pub applicant_class: PostClass,
    pub post_class: PostClass,
}

/// Labels every non-matching edge (a, b) with a's vote for b against M(a)
/// and reports the edges breaking the rule: edges M(X)×Y and M(Y)×Z are −1,
/// and +1 edges only lie in M(Y)×X or M(Z)×(X∪Y). An applicant on its
/// last-resort post counts as matched into Y.
pub fn edge_sign_violations(
    inst: &Instance,
    m: &Matching,
    partition: &Partition,
) -> Vec<SignViolation> {
    use PostClass::*;
    let mut out = Vec::new();
    for (a, b) in inst.edges() {
        let mine = m.post_of(a);
        if mine == Some(b) {
            continue;
        }
        let ca = mine.map_or(Y, |p| partition.class_of(p));
        let cb = partition.class_of(b);
        let label = inst.applicant_vote(a, Some(b), mine).expect("edge");
        let bad = match label {
            Vote::First => !matches!((ca, cb), (Y, X) | (Z, X) | (Z, Y)),
            _ => false,
        } || (matches!((ca, cb), (X, Y) | (Y, Z)) && label != Vote::Second);
        if bad {
            out.push(SignViolation {
                applicant: a,
                post: b,
                label,
                applicant_class: ca,
                post_class: cb,
            });
        }
    }
    out
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
    fn top_left_example() {
        // a1, a2: b1 > b2; a3: b1 > b2 > b3 (0-based ids)
        let inst = ties(3, &[&[0, 1], &[0, 1], &[0, 1, 2]]);
        let (h, p, t) = build_helper(&inst).unwrap();
        assert_eq!(p.x(), vec![PostId(0)]);
        assert_eq!(p.y(), vec![PostId(1)]);
        assert_eq!(p.z(), vec![PostId(2)]);
        assert_eq!(t.iteration_count(), 2);
        let want: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (2, 2)]
            .iter()
            .map(|&(a, b)| (ApplicantId(a), PostId(b)))
            .collect();
        assert_eq!(h.real_edges(), want);
        assert!(t.iterations[0].x_to_y.is_empty());
        assert!(t.iterations.last().unwrap().y_to_z.is_empty());
        assert!(solve(&inst).unwrap().is_popular());
    }

    #[test]
    fn bottom_left_has_no_popular_matching() {
        let inst = ties(3, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        let (h, p, t) = build_helper(&inst).unwrap();
        assert_eq!(t.iteration_count(), 3);
        assert_eq!(t.iterations[1].x_to_y, vec![PostId(0)]);
        assert_eq!(p.y(), vec![PostId(0)]);
        assert_eq!(p.z(), vec![PostId(1), PostId(2)]);
        assert_eq!(h.real_edges().len(), 6);
        assert_eq!(solve(&inst).unwrap(), Outcome::NoPopularMatching);
    }

    #[test]
    fn rejects_strict_posts() {
        let inst = Instance::new(
            vec![vec![PostId(0)]],
            vec![PostPolicy::Strict(vec![ApplicantId(0)])],
        )
        .unwrap();
        assert_eq!(solve(&inst).unwrap_err(), Error::ModelViolation(0));
    }

    #[test]
    fn last_resort_for_applicants_stuck_in_x() {
        // a0, a1 both want only b0: one of them falls back to its dummy
        let inst = ties(1, &[&[0], &[0]]);
        let s = solve_detailed(&inst).unwrap();
        assert_eq!(s.partition.dummies(), &[ApplicantId(0), ApplicantId(1)]);
        assert!(s
            .helper
            .edges()
            .iter()
            .any(|e| e.kind == EdgeKind::Dummy));
        let m = s.outcome.matching().unwrap();
        assert_eq!(m.len(), 1);
        assert!(s
            .helper_matching
            .iter()
            .any(|(_, p)| matches!(p, HelperPost::LastResort(_))));
    }

    #[test]
    fn single_applicant_single_post() {
        let inst = ties(1, &[&[0]]);
        let m = solve(&inst).unwrap();
        assert_eq!(m.matching().unwrap().len(), 1);
    }
}
