#![allow(dead_code)]

use popmatch::dm::{BipartiteGraph, BipartiteMatching};
use popmatch::gen::RandomSpec;
use popmatch::solver::{HelperPost, Partition, PostClass, Solution};
use popmatch::{ApplicantId, Instance, Matching, PostId, PostPolicy};

/// Applicant-proposing deferred acceptance on an all-strict instance.
pub fn deferred_acceptance(inst: &Instance) -> Matching {
    let rank = |b: PostId, a: ApplicantId| match inst.policy(b) {
        PostPolicy::Strict(list) => list.iter().position(|&x| x == a).expect("neighbour"),
        PostPolicy::SingleTie => panic!("deferred acceptance needs strict posts"),
    };
    let mut next = vec![0usize; inst.num_applicants()];
    let mut holder: Vec<Option<ApplicantId>> = vec![None; inst.num_posts()];
    let mut free: Vec<ApplicantId> = (0..inst.num_applicants()).rev().map(ApplicantId).collect();
    while let Some(a) = free.pop() {
        let Some(&b) = inst.prefs(a).get(next[a.0]) else {
            continue;
        };
        next[a.0] += 1;
        match holder[b.0] {
            None => holder[b.0] = Some(a),
            Some(cur) if rank(b, a) < rank(b, cur) => {
                holder[b.0] = Some(a);
                free.push(cur);
            }
            Some(_) => free.push(a),
        }
    }
    let pairs = holder
        .iter()
        .enumerate()
        .filter_map(|(b, a)| a.map(|a| (a, PostId(b))));
    Matching::from_pairs(inst, pairs).unwrap()
}

/// True when no applicant-post pair blocks `m`.
pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    inst.edges().all(|(a, b)| {
        let a_wants = m
            .post_of(a)
            .is_none_or(|cur| inst.applicant_rank(a, b) < inst.applicant_rank(a, cur));
        let b_wants = m
            .applicant_of(b)
            .is_none_or(|cur| inst.post_rank(b, a) < inst.post_rank(b, cur));
        !(a_wants && b_wants)
    })
}

/// Applicants with at least one neighbour in Z.
pub fn nbr_z(inst: &Instance, p: &Partition) -> Vec<bool> {
    inst.applicants()
        .map(|a| inst.prefs(a).iter().any(|&b| p.class_of(b) == PostClass::Z))
        .collect()
}

/// Spec for a small random instance; sizes and density drawn from `seed`.
pub fn small_spec(seed: u64, max_side: usize, tie_fraction: f64) -> RandomSpec {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0x5DEE_CE66;
    let mut next = |k: u64| {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        s % k
    };
    let na = 1 + next(max_side as u64) as usize;
    let nb = 1 + next(max_side as u64) as usize;
    let density = (0.3 + next(8) as f64 / 10.0).max(1.0 / nb as f64).min(1.0);
    RandomSpec {
        num_applicants: na,
        num_posts: nb,
        density,
        tie_fraction,
    }
}

/// Checks the structural invariants of a solver run. Returns a description
/// of the first failure.
pub fn solution_invariants(inst: &Instance, sol: &Solution) -> Result<(), String> {
    let p = &sol.partition;
    let f = inst.f_mask();
    for b in inst.posts() {
        match p.class_of(b) {
            PostClass::X if !f[b.0] => return Err(format!("{b} in X but not in F")),
            PostClass::Z if f[b.0] => return Err(format!("{b} in Z but in F")),
            _ => {}
        }
    }
    for a in inst.applicants() {
        if sol.helper.degree(a) > 2 {
            return Err(format!("{a} has degree {} in H", sol.helper.degree(a)));
        }
    }
    let nz = nbr_z(inst, p);
    for e in sol.helper.edges() {
        if let HelperPost::Real(b) = e.post {
            if p.class_of(b) == PostClass::X && nz[e.applicant.0] {
                return Err(format!("{} is in nbr(Z) but has an H edge to X post {b}", e.applicant));
            }
        }
    }
    let its = &sol.trace.iterations;
    if its.is_empty() {
        return Err("no iterations".into());
    }
    if !its[0].x_to_y.is_empty() {
        return Err("posts demoted from X in the first iteration".into());
    }
    if !its.last().unwrap().y_to_z.is_empty() {
        return Err("last iteration demoted posts to Z".into());
    }
    if its.len() > inst.num_posts() + 1 {
        return Err(format!("{} iterations for {} posts", its.len(), inst.num_posts()));
    }
    if let Some(m) = sol.outcome.matching() {
        for b in inst.posts() {
            if p.class_of(b) != PostClass::Z
                && m.applicant_of(b).is_none()
                && !inst.post_neighbours(b).is_empty()
                && sol.helper.graph().right_degree(b.0) > 0
            {
                return Err(format!("real post {b} in X or Y is unmatched"));
            }
        }
    }
    Ok(())
}

/// Every maximum matching of `g` by brute force.
pub fn all_maximum_matchings(g: &BipartiteGraph) -> Vec<BipartiteMatching> {
    let mut best: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut best_len = 0;
    let mut cur = Vec::new();
    let mut used = vec![false; g.right()];
    fn rec(
        g: &BipartiteGraph,
        u: usize,
        cur: &mut Vec<(usize, usize)>,
        used: &mut [bool],
        best: &mut Vec<Vec<(usize, usize)>>,
        best_len: &mut usize,
    ) {
        if u == g.left() {
            if cur.len() > *best_len {
                *best_len = cur.len();
                best.clear();
            }
            if cur.len() == *best_len {
                best.push(cur.clone());
            }
            return;
        }
        rec(g, u + 1, cur, used, best, best_len);
        for &v in g.neighbours(u) {
            if !used[v] {
                used[v] = true;
                cur.push((u, v));
                rec(g, u + 1, cur, used, best, best_len);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(g, 0, &mut cur, &mut used, &mut best, &mut best_len);
    best.into_iter()
        .map(|pairs| BipartiteMatching::from_pairs(g, pairs).unwrap())
        .collect()
}
