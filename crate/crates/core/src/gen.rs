//! Named example instances, the slow-convergence family and seeded random
//! instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dm::BipartiteGraph;
use crate::error::{Error, Result};
use crate::instance::{ApplicantId, Instance, Labels, Matching, PostId, PostPolicy};

pub const FIXTURE_NAMES: [&str; 4] = [
    "fig1_top_left",
    "fig1_bottom_left",
    "fig1_middle",
    "fig1_right",
];

/// An instance together with the vertex names it is usually drawn with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub instance: Instance,
    pub labels: Labels,
}

impl Fixture {
    /// Builds a single-tie instance from named preference lists. Posts are
    /// numbered in the order given.
    fn from_lists(applicants: &[(&str, &[&str])], posts: &[&str]) -> Self {
        let post_id = |name: &str| PostId(posts.iter().position(|&p| p == name).expect("post"));
        let prefs = applicants
            .iter()
            .map(|(_, list)| list.iter().map(|&p| post_id(p)).collect())
            .collect();
        Fixture {
            instance: Instance::with_ties(posts.len(), prefs).expect("fixture"),
            labels: Labels {
                applicants: applicants.iter().map(|(a, _)| a.to_string()).collect(),
                posts: posts.iter().map(|p| p.to_string()).collect(),
            },
        }
    }

    /// A matching given by vertex names.
    pub fn matching(&self, pairs: &[(&str, &str)]) -> Result<Matching> {
        let ids = pairs
            .iter()
            .map(|&(a, b)| {
                let a = self.labels.applicant_id(a).ok_or_else(|| Error::Unknown {
                    kind: "applicant",
                    name: a.to_string(),
                })?;
                let b = self.labels.post_id(b).ok_or_else(|| Error::Unknown {
                    kind: "post",
                    name: b.to_string(),
                })?;
                Ok((a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        Matching::from_pairs(&self.instance, ids)
    }

    pub fn post_names(&self, posts: &[PostId]) -> Vec<&str> {
        posts.iter().map(|&b| self.labels.post(b)).collect()
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let f = match name {
        "fig1_top_left" => Fixture::from_lists(
            &[
                ("a1", &["b1", "b2"]),
                ("a2", &["b1", "b2"]),
                ("a3", &["b1", "b2", "b3"]),
            ],
            &["b1", "b2", "b3"],
        ),
        "fig1_bottom_left" => Fixture::from_lists(
            &[
                ("a1", &["b1", "b2", "b3"]),
                ("a2", &["b1", "b2", "b3"]),
                ("a3", &["b1", "b2", "b3"]),
            ],
            &["b1", "b2", "b3"],
        ),
        "fig1_middle" => Fixture::from_lists(
            &[
                ("a0", &["b0", "b3"]),
                ("a1", &["b1", "b2"]),
                ("a2", &["b1", "b2"]),
                ("a3", &["b1", "b0", "b2"]),
            ],
            &["b0", "b1", "b2", "b3"],
        ),
        "fig1_right" => Fixture::from_lists(
            &[
                ("a1", &["b1", "b2"]),
                ("a2", &["b1", "y1", "b2"]),
                ("a3", &["b1", "b2", "b3"]),
                ("x1", &["y1", "y2", "y3"]),
                ("x2", &["y1", "y2"]),
            ],
            &["b1", "b2", "b3", "y1", "y2", "y3"],
        ),
        _ => {
            return Err(Error::Unknown {
                kind: "fixture",
                name: name.to_string(),
            })
        }
    };
    Ok(f)
}

/// Instance on which the solver needs n+1 rounds: round k+1 demotes
/// f_{k-1} from X to Y and s_k from Y to Z.
///
/// Applicants a_0..a_n, a'_1..a'_n; posts f_0..f_n, s_0..s_n.
///   a_0:  f_0 > s_0
///   a_i:  f_i > f_{i-1} > s_i > s_{i-1}     (0 < i < n)
///   a_n:  f_n > s_n
///   a'_i: f_i > s_i
/// That is 2n+1 applicants, 2n+2 posts and 6n edges.
pub fn tight_family(n: usize) -> Result<Fixture> {
    if n == 0 {
        return Err(Error::Parameter("tight family needs n >= 1".into()));
    }
    let f = |i: usize| PostId(i);
    let s = |i: usize| PostId(n + 1 + i);
    let mut prefs = vec![vec![f(0), s(0)]];
    let mut names = vec!["a0".to_string()];
    for i in 1..=n {
        prefs.push(if i < n {
            vec![f(i), f(i - 1), s(i), s(i - 1)]
        } else {
            vec![f(i), s(i)]
        });
        names.push(format!("a{i}"));
    }
    for i in 1..=n {
        prefs.push(vec![f(i), s(i)]);
        names.push(format!("a'{i}"));
    }
    let posts = (0..=n)
        .map(|i| format!("f{i}"))
        .chain((0..=n).map(|i| format!("s{i}")))
        .collect();
    Ok(Fixture {
        instance: Instance::with_ties(2 * n + 2, prefs)?,
        labels: Labels {
            applicants: names,
            posts,
        },
    })
}

/// Parameters for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub num_applicants: usize,
    pub num_posts: usize,
    /// Probability that a given post appears on a given applicant's list.
    pub density: f64,
    /// Probability that a post is a single tie; the rest rank their
    /// neighbours in a random strict order.
    pub tie_fraction: f64,
}

/// A random instance, fully determined by `seed` and `spec`.
///
/// Each applicant's list is a prefix of a random permutation of the posts;
/// its length counts successes in one Bernoulli(density) trial per post,
/// raised to 1 if every trial fails.
pub fn random_instance(seed: u64, spec: RandomSpec) -> Result<Instance> {
    let RandomSpec {
        num_applicants,
        num_posts,
        density,
        tie_fraction,
    } = spec;
    if num_posts == 0 {
        return Err(Error::NoPosts);
    }
    if !(0.0..=1.0).contains(&density) || density * (num_posts as f64) < 1.0 {
        return Err(Error::Parameter(format!(
            "density {density} gives fewer than one expected neighbour per applicant over {num_posts} posts"
        )));
    }
    if !(0.0..=1.0).contains(&tie_fraction) {
        return Err(Error::Parameter(format!("tie fraction {tie_fraction} is not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<PostId> = (0..num_posts).map(PostId).collect();
    let mut prefs = Vec::with_capacity(num_applicants);
    for _ in 0..num_applicants {
        let len = (0..num_posts).filter(|_| rng.gen_bool(density)).count().max(1);
        order.shuffle(&mut rng);
        prefs.push(order[..len].to_vec());
    }
    let mut nbrs: Vec<Vec<ApplicantId>> = vec![Vec::new(); num_posts];
    for (a, list) in prefs.iter().enumerate() {
        for b in list {
            nbrs[b.0].push(ApplicantId(a));
        }
    }
    let policies = nbrs
        .into_iter()
        .map(|mut list| {
            if rng.gen_bool(tie_fraction) {
                PostPolicy::SingleTie
            } else {
                list.shuffle(&mut rng);
                PostPolicy::Strict(list)
            }
        })
        .collect();
    Instance::new(prefs, policies)
}

/// A random bipartite graph keeping each pair with probability `density`.
pub fn random_graph(seed: u64, left: usize, right: usize, density: f64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameter(format!("density {density} is not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..left {
        for v in 0..right {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::new(left, right, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format;

    #[test]
    fn fixtures_match_their_descriptions() {
        let mid = fixture("fig1_middle").unwrap();
        let a0 = mid.labels.applicant_id("a0").unwrap();
        let a3 = mid.labels.applicant_id("a3").unwrap();
        let names = |a| mid.post_names(mid.instance.prefs(a));
        assert_eq!(names(a0), ["b0", "b3"]);
        assert_eq!(names(a3), ["b1", "b0", "b2"]);

        let right = fixture("fig1_right").unwrap();
        assert_eq!(right.labels.applicants, ["a1", "a2", "a3", "x1", "x2"]);
        assert_eq!(right.labels.posts, ["b1", "b2", "b3", "y1", "y2", "y3"]);

        let bl = fixture("fig1_bottom_left").unwrap();
        for a in bl.instance.applicants() {
            assert_eq!(bl.post_names(bl.instance.prefs(a)), ["b1", "b2", "b3"]);
        }
        assert!(matches!(fixture("fig2"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn fixtures_round_trip_through_text() {
        for name in FIXTURE_NAMES {
            let inst = fixture(name).unwrap().instance;
            let text = format::serialize_instance(&inst);
            assert_eq!(format::parse_instance(&text).unwrap(), inst, "{name}");
        }
    }

    #[test]
    fn tight_family_counts() {
        for n in 1..=50 {
            let inst = tight_family(n).unwrap().instance;
            assert_eq!(inst.num_applicants(), 2 * n + 1);
            assert_eq!(inst.num_posts(), 2 * n + 2);
            assert_eq!(inst.num_edges(), 6 * n);
        }
        assert!(tight_family(0).is_err());
    }

    #[test]
    fn tight_family_shape() {
        let t = tight_family(3).unwrap();
        let list = |a: &str| t.post_names(t.instance.prefs(t.labels.applicant_id(a).unwrap()));
        assert_eq!(list("a0"), ["f0", "s0"]);
        assert_eq!(list("a2"), ["f2", "f1", "s2", "s1"]);
        assert_eq!(list("a3"), ["f3", "s3"]);
        assert_eq!(list("a'2"), ["f2", "s2"]);
    }

    fn spec(n: usize, density: f64, tie_fraction: f64) -> RandomSpec {
        RandomSpec {
            num_applicants: n,
            num_posts: n,
            density,
            tie_fraction,
        }
    }

    #[test]
    fn random_is_deterministic() {
        let s = spec(6, 0.5, 0.5);
        assert_eq!(random_instance(7, s).unwrap(), random_instance(7, s).unwrap());
        assert_ne!(random_instance(7, s).unwrap(), random_instance(8, s).unwrap());
    }

    #[test]
    fn complete_lists_at_full_density() {
        let inst = random_instance(3, spec(5, 1.0, 1.0)).unwrap();
        assert!(inst.all_ties());
        for a in inst.applicants() {
            let mut list = inst.prefs(a).to_vec();
            list.sort();
            assert_eq!(list, (0..5).map(PostId).collect::<Vec<_>>());
        }
    }

    #[test]
    fn strict_only() {
        let inst = random_instance(3, spec(5, 0.6, 0.0)).unwrap();
        assert!(inst.posts().all(|b| !inst.policy(b).is_tie()));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(random_instance(0, spec(5, 0.1, 1.0)).is_err());
        assert!(random_instance(0, spec(5, 1.5, 1.0)).is_err());
        assert!(random_instance(0, spec(5, 0.5, -0.1)).is_err());
    }
}
