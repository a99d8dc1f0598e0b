//! Instances, matchings and the vote each vertex casts between two partners.
//!
//! Applicants rank their posts strictly. A post either holds all of its
//! neighbours in one tie (it only cares about being matched) or ranks them
//! strictly. Ids are dense and 0-based; ranks are 1-based everywhere they are
//! reported.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApplicantId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PostId(pub usize);

impl ApplicantId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl PostId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ApplicantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl fmt::Display for PostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// How a post orders its neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PostPolicy {
    /// All neighbours in a single tie. The neighbourhood is derived from the
    /// applicant lists and never stored.
    SingleTie,
    /// Strict order, rank 1 first. Must list exactly the applicants that
    /// list this post.
    Strict(Vec<ApplicantId>),
}

impl PostPolicy {
    pub fn is_tie(&self) -> bool {
        matches!(self, PostPolicy::SingleTie)
    }
}

/// 1-based rank, or `Infinity` when no such neighbour exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(usize),
    Infinity,
}

impl Rank {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rank::Finite(r) => Some(r),
            Rank::Infinity => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    Applicant(ApplicantId),
    Post(PostId),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Applicant(a) => a.fmt(f),
            Vertex::Post(b) => b.fmt(f),
        }
    }
}

/// A vertex's vote between two alternatives `p` and `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vote {
    /// Prefers the second alternative.
    Second = -1,
    Abstain = 0,
    /// Prefers the first alternative.
    First = 1,
}

impl Vote {
    pub fn value(self) -> i32 {
        self as i32
    }

    pub fn reversed(self) -> Vote {
        match self {
            Vote::First => Vote::Second,
            Vote::Second => Vote::First,
            Vote::Abstain => Vote::Abstain,
        }
    }

    /// Vote between two ranks where `None` means unmatched. Lower rank wins,
    /// any partner beats none.
    fn between(p: Option<usize>, q: Option<usize>) -> Vote {
        match (p, q) {
            (None, None) => Vote::Abstain,
            (Some(_), None) => Vote::First,
            (None, Some(_)) => Vote::Second,
            (Some(x), Some(y)) => match x.cmp(&y) {
                std::cmp::Ordering::Less => Vote::First,
                std::cmp::Ordering::Greater => Vote::Second,
                std::cmp::Ordering::Equal => Vote::Abstain,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct EdgeRanks {
    applicant: usize,
    /// `None` for single-tie posts.
    post: Option<usize>,
}

/// A validated preference instance. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Instance {
    prefs: Vec<Vec<PostId>>,
    policies: Vec<PostPolicy>,
    post_nbrs: Vec<Vec<ApplicantId>>,
    ranks: HashMap<(usize, usize), EdgeRanks>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.prefs == other.prefs && self.policies == other.policies
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds an instance from applicant lists and post policies, checking
    /// every invariant.
    pub fn new(prefs: Vec<Vec<PostId>>, policies: Vec<PostPolicy>) -> Result<Self> {
        let num_posts = policies.len();
        let mut post_nbrs = vec![Vec::new(); num_posts];
        let mut ranks = HashMap::new();
        for (a, list) in prefs.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::EmptyPreferenceList(a));
            }
            for (i, &b) in list.iter().enumerate() {
                if b.0 >= num_posts {
                    return Err(Error::DanglingId {
                        line: 0,
                        kind: "post",
                        id: b.0,
                        bound: num_posts,
                    });
                }
                let prev = ranks.insert(
                    (a, b.0),
                    EdgeRanks {
                        applicant: i + 1,
                        post: None,
                    },
                );
                if prev.is_some() {
                    return Err(Error::DuplicateRank {
                        line: 0,
                        kind: "applicant",
                        owner: a,
                        entry: b.0,
                    });
                }
                post_nbrs[b.0].push(ApplicantId(a));
            }
        }
        for (b, policy) in policies.iter().enumerate() {
            let PostPolicy::Strict(list) = policy else {
                continue;
            };
            let mut seen = BTreeSet::new();
            for (i, &a) in list.iter().enumerate() {
                if a.0 >= prefs.len() {
                    return Err(Error::DanglingId {
                        line: 0,
                        kind: "applicant",
                        id: a.0,
                        bound: prefs.len(),
                    });
                }
                if !seen.insert(a) {
                    return Err(Error::DuplicateRank {
                        line: 0,
                        kind: "post",
                        owner: b,
                        entry: a.0,
                    });
                }
                match ranks.get_mut(&(a.0, b)) {
                    Some(r) => r.post = Some(i + 1),
                    None => {
                        return Err(Error::Symmetry {
                            post: b,
                            detail: format!("applicant {} does not list it", a.0),
                        })
                    }
                }
            }
            if let Some(missing) = post_nbrs[b].iter().find(|a| !seen.contains(a)) {
                return Err(Error::Symmetry {
                    post: b,
                    detail: format!("applicant {} lists it but is not ranked", missing.0),
                });
            }
        }
        Ok(Instance {
            prefs,
            policies,
            post_nbrs,
            ranks,
        })
    }

    /// Instance in which every post is a single tie.
    pub fn with_ties(num_posts: usize, prefs: Vec<Vec<PostId>>) -> Result<Self> {
        Self::new(prefs, vec![PostPolicy::SingleTie; num_posts])
    }

    pub fn num_applicants(&self) -> usize {
        self.prefs.len()
    }

    pub fn num_posts(&self) -> usize {
        self.policies.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ranks.len()
    }

    pub fn applicants(&self) -> impl Iterator<Item = ApplicantId> + '_ {
        (0..self.prefs.len()).map(ApplicantId)
    }

    pub fn posts(&self) -> impl Iterator<Item = PostId> + '_ {
        (0..self.policies.len()).map(PostId)
    }

    /// `a`'s list, rank 1 first.
    pub fn prefs(&self, a: ApplicantId) -> &[PostId] {
        &self.prefs[a.0]
    }

    pub fn policy(&self, b: PostId) -> &PostPolicy {
        &self.policies[b.0]
    }

    /// True when every post is a single tie.
    pub fn all_ties(&self) -> bool {
        self.policies.iter().all(PostPolicy::is_tie)
    }

    /// Applicants that list `b`, in increasing id order.
    pub fn post_neighbours(&self, b: PostId) -> &[ApplicantId] {
        &self.post_nbrs[b.0]
    }

    pub fn has_edge(&self, a: ApplicantId, b: PostId) -> bool {
        self.ranks.contains_key(&(a.0, b.0))
    }

    /// Edges as (applicant, post) pairs in applicant-then-rank order.
    pub fn edges(&self) -> impl Iterator<Item = (ApplicantId, PostId)> + '_ {
        self.prefs
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().map(move |&b| (ApplicantId(a), b)))
    }

    /// Rank of `b` in `a`'s list.
    pub fn applicant_rank(&self, a: ApplicantId, b: PostId) -> Option<usize> {
        self.ranks.get(&(a.0, b.0)).map(|r| r.applicant)
    }

    /// Rank of `a` in `b`'s list; every neighbour has rank 1 at a tie post.
    pub fn post_rank(&self, b: PostId, a: ApplicantId) -> Option<usize> {
        self.ranks.get(&(a.0, b.0)).map(|r| r.post.unwrap_or(1))
    }

    /// `a`'s first-choice post.
    pub fn f_post(&self, a: ApplicantId) -> PostId {
        self.prefs[a.0][0]
    }

    /// The set of first-choice posts.
    pub fn f_set(&self) -> BTreeSet<PostId> {
        self.prefs.iter().map(|l| l[0]).collect()
    }

    /// Membership mask for [`Instance::f_set`].
    pub fn f_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.num_posts()];
        for l in &self.prefs {
            mask[l[0].0] = true;
        }
        mask
    }

    /// Rank of `a`'s most preferred post outside the first-choice set.
    pub fn r_rank(&self, a: ApplicantId) -> Rank {
        self.r_rank_with(a, &self.f_mask())
    }

    pub(crate) fn r_rank_with(&self, a: ApplicantId, f_mask: &[bool]) -> Rank {
        self.prefs[a.0]
            .iter()
            .position(|b| !f_mask[b.0])
            .map_or(Rank::Infinity, |i| Rank::Finite(i + 1))
    }

    /// Vote of applicant `a` for partner `p` against partner `q`.
    pub fn applicant_vote(
        &self,
        a: ApplicantId,
        p: Option<PostId>,
        q: Option<PostId>,
    ) -> Result<Vote> {
        let rank = |x: Option<PostId>| -> Result<Option<usize>> {
            x.map(|b| {
                self.applicant_rank(a, b).ok_or(Error::NotANeighbour {
                    vertex: a.to_string(),
                    partner: b.0,
                })
            })
            .transpose()
        };
        Ok(Vote::between(rank(p)?, rank(q)?))
    }

    /// Vote of post `b` for partner `p` against partner `q`.
    pub fn post_vote(
        &self,
        b: PostId,
        p: Option<ApplicantId>,
        q: Option<ApplicantId>,
    ) -> Result<Vote> {
        let rank = |x: Option<ApplicantId>| -> Result<Option<usize>> {
            x.map(|a| {
                self.post_rank(b, a).ok_or(Error::NotANeighbour {
                    vertex: b.to_string(),
                    partner: a.0,
                })
            })
            .transpose()
        };
        Ok(Vote::between(rank(p)?, rank(q)?))
    }

    /// Vote of `v` between partners given as raw indices on the other side.
    pub fn vote(&self, v: Vertex, p: Option<usize>, q: Option<usize>) -> Result<Vote> {
        match v {
            Vertex::Applicant(a) => self.applicant_vote(a, p.map(PostId), q.map(PostId)),
            Vertex::Post(b) => self.post_vote(b, p.map(ApplicantId), q.map(ApplicantId)),
        }
    }

    pub(crate) fn validate_applicant(&self, a: usize) -> Result<ApplicantId> {
        if a < self.num_applicants() {
            Ok(ApplicantId(a))
        } else {
            Err(Error::InvalidMatching(format!(
                "applicant {a} out of range ({} applicants)",
                self.num_applicants()
            )))
        }
    }
}

/// A matching of the instance. Unmatched applicants are equivalently matched
/// to their private last-resort post.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    of_applicant: Vec<Option<PostId>>,
    of_post: Vec<Option<ApplicantId>>,
}

impl Matching {
    pub fn empty(num_applicants: usize, num_posts: usize) -> Self {
        Matching {
            of_applicant: vec![None; num_applicants],
            of_post: vec![None; num_posts],
        }
    }

    /// Builds a matching from (applicant, post) pairs, checking that the
    /// pairs are edges of `inst` and that no vertex is used twice.
    pub fn from_pairs<I>(inst: &Instance, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ApplicantId, PostId)>,
    {
        let mut m = Matching::empty(inst.num_applicants(), inst.num_posts());
        for (a, b) in pairs {
            inst.validate_applicant(a.0)?;
            if b.0 >= inst.num_posts() {
                return Err(Error::InvalidMatching(format!("post {} out of range", b.0)));
            }
            if !inst.has_edge(a, b) {
                return Err(Error::InvalidMatching(format!("({a}, {b}) is not an edge")));
            }
            if m.of_applicant[a.0].is_some() {
                return Err(Error::InvalidMatching(format!("{a} matched twice")));
            }
            if m.of_post[b.0].is_some() {
                return Err(Error::InvalidMatching(format!("{b} matched twice")));
            }
            m.of_applicant[a.0] = Some(b);
            m.of_post[b.0] = Some(a);
        }
        Ok(m)
    }

    /// Index-pair convenience over [`Matching::from_pairs`].
    pub fn from_index_pairs(inst: &Instance, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_pairs(inst, pairs.iter().map(|&(a, b)| (ApplicantId(a), PostId(b))))
    }

    /// Checks that this matching belongs to `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.of_applicant.len() != inst.num_applicants() || self.of_post.len() != inst.num_posts()
        {
            return Err(Error::InvalidMatching(format!(
                "matching is sized {}x{}, instance is {}x{}",
                self.of_applicant.len(),
                self.of_post.len(),
                inst.num_applicants(),
                inst.num_posts()
            )));
        }
        for (a, b) in self.pairs() {
            if !inst.has_edge(a, b) {
                return Err(Error::InvalidMatching(format!("({a}, {b}) is not an edge")));
            }
        }
        Ok(())
    }

    pub fn num_applicants(&self) -> usize {
        self.of_applicant.len()
    }

    pub fn num_posts(&self) -> usize {
        self.of_post.len()
    }

    pub fn post_of(&self, a: ApplicantId) -> Option<PostId> {
        self.of_applicant[a.0]
    }

    pub fn applicant_of(&self, b: PostId) -> Option<ApplicantId> {
        self.of_post[b.0]
    }

    /// Partner of `v` as a raw index on the other side.
    pub fn partner(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::Applicant(a) => self.post_of(a).map(PostId::index),
            Vertex::Post(b) => self.applicant_of(b).map(ApplicantId::index),
        }
    }

    pub fn len(&self) -> usize {
        self.of_applicant.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Matched pairs in applicant order.
    pub fn pairs(&self) -> impl Iterator<Item = (ApplicantId, PostId)> + '_ {
        self.of_applicant
            .iter()
            .enumerate()
            .filter_map(|(a, b)| b.map(|b| (ApplicantId(a), b)))
    }

    pub(crate) fn set(&mut self, a: ApplicantId, b: PostId) {
        debug_assert!(self.of_applicant[a.0].is_none() && self.of_post[b.0].is_none());
        self.of_applicant[a.0] = Some(b);
        self.of_post[b.0] = Some(a);
    }

    pub(crate) fn unset(&mut self, a: ApplicantId) {
        if let Some(b) = self.of_applicant[a.0].take() {
            self.of_post[b.0] = None;
        }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({a}, {b})")?;
        }
        f.write_str("}")
    }
}

/// Display names for vertices, kept apart from the instance so the text
/// format stays purely numeric.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labels {
    pub applicants: Vec<String>,
    pub posts: Vec<String>,
}

impl Labels {
    /// `a0, a1, ...` and `b0, b1, ...`.
    pub fn numeric(num_applicants: usize, num_posts: usize) -> Self {
        Labels {
            applicants: (0..num_applicants).map(|i| format!("a{i}")).collect(),
            posts: (0..num_posts).map(|i| format!("b{i}")).collect(),
        }
    }

    pub fn applicant(&self, a: ApplicantId) -> &str {
        &self.applicants[a.0]
    }

    pub fn post(&self, b: PostId) -> &str {
        &self.posts[b.0]
    }

    pub fn applicant_id(&self, name: &str) -> Option<ApplicantId> {
        self.applicants.iter().position(|n| n == name).map(ApplicantId)
    }

    pub fn post_id(&self, name: &str) -> Option<PostId> {
        self.posts.iter().position(|n| n == name).map(PostId)
    }
}
