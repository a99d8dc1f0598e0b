//! (2,2)-E3-SAT to popular matching with strict and single-tie posts.
//!
//! Variable j becomes a 4-cycle a_j1 - b_j1 - a_j2 - b_j2. Clause i becomes a
//! subdivided claw: centre post c_i, applicants x_i1..x_i3, posts y_i1..y_i3.
//! Post y_ik is joined to a_j1 when the k-th literal of clause i is v_j and
//! to a_j2 when it is ¬v_j.
//!
//! Vertex ids: applicants are a_11, a_12, a_21, ... followed by x_11, x_12,
//! x_13, x_21, ...; posts are b_11, b_12, ... then c_1..c_m then y_11, ....
//! All indices in this API are 0-based; names are 1-based.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{ApplicantId, Instance, Labels, Matching, PostId, PostPolicy};
use crate::oracle::{self, Guard};
use crate::solver::Outcome;
use crate::verifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// A CNF formula as read, before any shape checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

/// A formula with three literals over distinct variables per clause, in
/// which every variable occurs exactly twice positively and twice negatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf22e3 {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf22e3 {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Index of the first clause `assignment` falsifies.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.holds(assignment)))
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars && self.first_unsatisfied(assignment).is_none()
    }

    pub fn to_cnf(&self) -> Cnf {
        Cnf {
            num_vars: self.num_vars,
            clauses: self.clauses.iter().map(|c| c.to_vec()).collect(),
        }
    }
}

pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let syntax = |message: &str| Error::Syntax {
                line: line_no,
                column: 1,
                message: message.to_string(),
            };
            if header.is_some() {
                return Err(syntax("second problem line"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(syntax("expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2].parse().map_err(|_| syntax("bad variable count"))?;
            let m = parts[3].parse().map_err(|_| syntax("bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::Syntax {
                line: line_no,
                column: 1,
                message: "clause before the `p cnf` line".into(),
            });
        };
        let mut column = 1;
        for token in line.split_whitespace() {
            column += line[column - 1..].find(token).unwrap_or(0);
            let value: i64 = token.parse().map_err(|_| Error::Syntax {
                line: line_no,
                column,
                message: format!("expected an integer literal, found `{token}`"),
            })?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = value.unsigned_abs() as usize;
                if var > n {
                    return Err(Error::DanglingId {
                        line: line_no,
                        kind: "variable",
                        id: var,
                        bound: n,
                    });
                }
                current.push(Literal {
                    var: var - 1,
                    positive: value > 0,
                });
            }
            column += token.len();
        }
    }
    let Some((num_vars, m)) = header else {
        return Err(Error::Syntax {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `p cnf` line".into(),
        });
    };
    if !current.is_empty() {
        return Err(Error::Syntax {
            line: text.lines().count(),
            column: 1,
            message: "last clause is not terminated by 0".into(),
        });
    }
    if clauses.len() != m {
        return Err(Error::InvalidFormula(format!(
            "header declares {m} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Cnf { num_vars, clauses })
}

pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for clause in &cnf.clauses {
        for l in clause {
            let _ = write!(out, "{} ", l.dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Checks the (2,2)-E3 shape and reports every violation at once.
pub fn validate_cnf(cnf: &Cnf) -> Result<Cnf22e3> {
    let mut problems = Vec::new();
    let mut pos = vec![0usize; cnf.num_vars];
    let mut neg = vec![0usize; cnf.num_vars];
    for (i, clause) in cnf.clauses.iter().enumerate() {
        if clause.len() != 3 {
            problems.push(format!(
                "clause {} has {} literals, expected 3",
                i + 1,
                clause.len()
            ));
        }
        for (k, l) in clause.iter().enumerate() {
            if l.var >= cnf.num_vars {
                problems.push(format!("clause {} uses undeclared variable {}", i + 1, l.var + 1));
                continue;
            }
            if clause[..k].iter().any(|o| o.var == l.var) {
                problems.push(format!("clause {} repeats variable {}", i + 1, l.var + 1));
            }
            if l.positive {
                pos[l.var] += 1;
            } else {
                neg[l.var] += 1;
            }
        }
    }
    for v in 0..cnf.num_vars {
        if pos[v] != 2 || neg[v] != 2 {
            problems.push(format!(
                "variable {} occurs {} times positively and {} times negatively, expected 2 and 2",
                v + 1,
                pos[v],
                neg[v]
            ));
        }
    }
    if !problems.is_empty() {
        return Err(Error::InvalidFormula(problems.join("; ")));
    }
    Ok(Cnf22e3 {
        num_vars: cnf.num_vars,
        clauses: cnf
            .clauses
            .iter()
            .map(|c| [c[0], c[1], c[2]])
            .collect(),
    })
}

/// Where each gadget vertex lives in the reduced instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetIndex {
    num_vars: usize,
    num_clauses: usize,
    /// Occurrence (i, k) → the variable-gadget applicant its y post joins.
    interconnect: Vec<[ApplicantId; 3]>,
}

impl GadgetIndex {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    /// a_{j,t} for t ∈ {1, 2}.
    pub fn a(&self, j: usize, t: usize) -> ApplicantId {
        debug_assert!(j < self.num_vars && (1..=2).contains(&t));
        ApplicantId(2 * j + t - 1)
    }

    /// b_{j,t} for t ∈ {1, 2}.
    pub fn b(&self, j: usize, t: usize) -> PostId {
        debug_assert!(j < self.num_vars && (1..=2).contains(&t));
        PostId(2 * j + t - 1)
    }

    pub fn c(&self, i: usize) -> PostId {
        PostId(2 * self.num_vars + i)
    }

    pub fn x(&self, i: usize, k: usize) -> ApplicantId {
        ApplicantId(2 * self.num_vars + 3 * i + k)
    }

    pub fn y(&self, i: usize, k: usize) -> PostId {
        PostId(2 * self.num_vars + self.num_clauses + 3 * i + k)
    }

    pub fn interconnect(&self, i: usize, k: usize) -> ApplicantId {
        self.interconnect[i][k]
    }

    /// (j, t) of a variable-gadget applicant.
    pub fn variable_of(&self, a: ApplicantId) -> Option<(usize, usize)> {
        (a.0 < 2 * self.num_vars).then(|| (a.0 / 2, a.0 % 2 + 1))
    }

    pub fn labels(&self) -> Labels {
        let mut labels = Labels::default();
        for j in 1..=self.num_vars {
            labels.applicants.push(format!("a_{j}_1"));
            labels.applicants.push(format!("a_{j}_2"));
            labels.posts.push(format!("b_{j}_1"));
            labels.posts.push(format!("b_{j}_2"));
        }
        for i in 1..=self.num_clauses {
            labels.posts.push(format!("c_{i}"));
            for k in 1..=3 {
                labels.applicants.push(format!("x_{i}_{k}"));
            }
        }
        for i in 1..=self.num_clauses {
            for k in 1..=3 {
                labels.posts.push(format!("y_{i}_{k}"));
            }
        }
        labels
    }

    /// One `a <id> <name>` or `b <id> <name>` line per vertex.
    pub fn sidecar(&self) -> String {
        let labels = self.labels();
        let mut out = String::new();
        for (i, name) in labels.applicants.iter().enumerate() {
            let _ = writeln!(out, "a {i} {name}");
        }
        for (i, name) in labels.posts.iter().enumerate() {
            let _ = writeln!(out, "b {i} {name}");
        }
        out
    }
}

pub fn build_instance(cnf: &Cnf22e3) -> (Instance, GadgetIndex) {
    let n = cnf.num_vars;
    let m = cnf.num_clauses();
    let interconnect: Vec<[ApplicantId; 3]> = cnf
        .clauses
        .iter()
        .map(|c| c.map(|l| ApplicantId(2 * l.var + usize::from(!l.positive))))
        .collect();
    let idx = GadgetIndex {
        num_vars: n,
        num_clauses: m,
        interconnect,
    };

    let mut prefs: Vec<Vec<PostId>> = vec![Vec::new(); 2 * n + 3 * m];
    let mut policies: Vec<PostPolicy> = vec![PostPolicy::SingleTie; 2 * n + 4 * m];
    for j in 0..n {
        for t in 1..=2 {
            prefs[idx.a(j, t).0].push(idx.b(j, 1));
        }
    }
    // occurrence y's in clause order give ranks 2 and 3
    for i in 0..m {
        for k in 0..3 {
            prefs[idx.interconnect(i, k).0].push(idx.y(i, k));
        }
    }
    for j in 0..n {
        for t in 1..=2 {
            prefs[idx.a(j, t).0].push(idx.b(j, 2));
        }
    }
    for i in 0..m {
        for k in 0..3 {
            prefs[idx.x(i, k).0] = vec![idx.c(i), idx.y(i, k)];
            policies[idx.y(i, k).0] =
                PostPolicy::Strict(vec![idx.x(i, k), idx.interconnect(i, k)]);
        }
    }
    let inst = Instance::new(prefs, policies).expect("gadget construction is well formed");
    (inst, idx)
}

/// The Claim-7-shaped matching with the given gadget states: `values[j]`
/// picks the variable gadget's perfect matching, `unmatched[i]` is the
/// position of clause i's unmatched y post.
pub fn candidate(inst: &Instance, idx: &GadgetIndex, values: &[bool], unmatched: &[usize]) -> Matching {
    let mut m = Matching::empty(inst.num_applicants(), inst.num_posts());
    for (j, &v) in values.iter().enumerate() {
        let (first, second) = if v { (1, 2) } else { (2, 1) };
        m.set(idx.a(j, 1), idx.b(j, first));
        m.set(idx.a(j, 2), idx.b(j, second));
    }
    for (i, &k) in unmatched.iter().enumerate() {
        m.set(idx.x(i, k), idx.c(i));
        for d in 1..3 {
            let kk = (k + d) % 3;
            m.set(idx.x(i, kk), idx.y(i, kk));
        }
    }
    m
}

/// Does leaving y_ik unmatched keep its interconnecting applicant on b_j1?
fn chosen_literal_true(idx: &GadgetIndex, values: &[bool], i: usize, k: usize) -> bool {
    let (j, t) = idx.variable_of(idx.interconnect(i, k)).expect("variable applicant");
    values[j] == (t == 1)
}

/// The popular matching built from a satisfying assignment, choosing the
/// first true literal of every clause.
pub fn matching_from_assignment(
    cnf: &Cnf22e3,
    inst: &Instance,
    idx: &GadgetIndex,
    assignment: &[bool],
) -> Result<Matching> {
    if assignment.len() != cnf.num_vars {
        return Err(Error::Parameter(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            cnf.num_vars
        )));
    }
    if let Some(i) = cnf.first_unsatisfied(assignment) {
        return Err(Error::Unsatisfied(i + 1));
    }
    let unmatched: Vec<usize> = cnf
        .clauses
        .iter()
        .map(|c| c.iter().position(|l| l.holds(assignment)).expect("satisfied"))
        .collect();
    Ok(candidate(inst, idx, assignment, &unmatched))
}

/// Reads the truth assignment off a popular matching, rejecting matchings
/// that break the structure every popular matching of a reduced instance
/// has.
pub fn assignment_from_matching(
    cnf: &Cnf22e3,
    inst: &Instance,
    idx: &GadgetIndex,
    m: &Matching,
) -> Result<Vec<bool>> {
    m.validate(inst)?;
    let labels = idx.labels();
    for i in 0..idx.num_clauses {
        for k in 0..3 {
            let a = idx.interconnect(i, k);
            if m.applicant_of(idx.y(i, k)) == Some(a) {
                return Err(Error::Structure(format!(
                    "interconnecting edge ({}, {}) is matched",
                    labels.applicant(a),
                    labels.post(idx.y(i, k))
                )));
            }
        }
    }
    let mut values = Vec::with_capacity(idx.num_vars);
    for j in 0..idx.num_vars {
        let got = (m.post_of(idx.a(j, 1)), m.post_of(idx.a(j, 2)));
        if got == (Some(idx.b(j, 1)), Some(idx.b(j, 2))) {
            values.push(true);
        } else if got == (Some(idx.b(j, 2)), Some(idx.b(j, 1))) {
            values.push(false);
        } else {
            return Err(Error::Structure(format!(
                "variable gadget {} is not perfectly matched",
                j + 1
            )));
        }
    }
    for i in 0..idx.num_clauses {
        let free: Vec<usize> = (0..3)
            .filter(|&k| m.applicant_of(idx.y(i, k)).is_none())
            .collect();
        if free.len() != 1 {
            return Err(Error::Structure(format!(
                "clause {} leaves {} y posts unmatched, expected 1",
                i + 1,
                free.len()
            )));
        }
        if !chosen_literal_true(idx, &values, i, free[0]) {
            return Err(Error::Structure(format!(
                "{} is unmatched but {} is not on its first post",
                labels.post(idx.y(i, free[0])),
                labels.applicant(idx.interconnect(i, free[0]))
            )));
        }
    }
    if let Some(i) = cnf.first_unsatisfied(&values) {
        return Err(Error::Unsatisfied(i + 1));
    }
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    /// Skip candidates whose unmatched y has its interconnecting applicant
    /// off b_j1; those always admit a (+1,+1) edge at an unmatched vertex.
    pub prune: bool,
    /// Stop at the first popular candidate.
    pub stop_at_first: bool,
    /// Limit on 2ⁿ·3ᵐ.
    pub max_candidates: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            prune: true,
            stop_at_first: true,
            max_candidates: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecideStats {
    /// 2ⁿ·3ᵐ.
    pub candidates: u64,
    pub pruned: u64,
    pub verified: u64,
    pub popular: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub outcome: Outcome,
    pub stats: DecideStats,
}

pub fn decide_reduced(inst: &Instance, idx: &GadgetIndex) -> Result<Decision> {
    decide_reduced_with(inst, idx, DecideOptions::default())
}

/// Searches the candidates with two perfect matchings per variable gadget
/// and three configurations per clause gadget, testing each exactly.
pub fn decide_reduced_with(inst: &Instance, idx: &GadgetIndex, opts: DecideOptions) -> Result<Decision> {
    let (n, m) = (idx.num_vars, idx.num_clauses);
    let total = 3u64
        .checked_pow(m as u32)
        .and_then(|c| c.checked_mul(1u64.checked_shl(n as u32)?))
        .filter(|&t| t <= opts.max_candidates)
        .ok_or_else(|| {
            Error::GuardExceeded(format!(
                "2^{n}·3^{m} candidates exceed the limit of {}",
                opts.max_candidates
            ))
        })?;
    let mut stats = DecideStats {
        candidates: total,
        ..DecideStats::default()
    };
    let mut found = None;
    let mut values = vec![false; n];
    'assignments: for bits in 0..(1u64 << n) {
        for (j, v) in values.iter_mut().enumerate() {
            *v = bits >> j & 1 == 1;
        }
        let mut choice = vec![0usize; m];
        loop {
            let keep = !opts.prune
                || choice
                    .iter()
                    .enumerate()
                    .all(|(i, &k)| chosen_literal_true(idx, &values, i, k));
            if keep {
                stats.verified += 1;
                let cand = candidate(inst, idx, &values, &choice);
                if verifier::is_popular(inst, &cand)? {
                    stats.popular += 1;
                    if found.is_none() {
                        found = Some(cand);
                    }
                    if opts.stop_at_first {
                        break 'assignments;
                    }
                }
            } else {
                stats.pruned += 1;
            }
            // next clause configuration, odometer style
            let mut i = 0;
            while i < m && choice[i] == 2 {
                choice[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            choice[i] += 1;
        }
    }
    let outcome = match found {
        Some(mt) => Outcome::Popular(mt),
        None => Outcome::NoPopularMatching,
    };
    Ok(Decision { outcome, stats })
}

/// Compares `decide_reduced` with full enumeration. Only feasible for tiny
/// instances; the guard applies to the enumeration.
pub fn cross_check_with_oracle(inst: &Instance, idx: &GadgetIndex, guard: Guard) -> Result<bool> {
    let exhaustive = !oracle::popular_set_guarded(inst, guard)?.is_empty();
    let restricted = decide_reduced(inst, idx)?.outcome.is_popular();
    Ok(exhaustive == restricted)
}

/// Brute force over all 2ⁿ assignments; n ≤ 20.
pub fn solve_sat(cnf: &Cnf22e3) -> Result<Option<Vec<bool>>> {
    let n = cnf.num_vars;
    if n > 20 {
        return Err(Error::GuardExceeded(format!(
            "brute-force SAT is limited to 20 variables, formula has {n}"
        )));
    }
    let mut values = vec![false; n];
    for bits in 0..(1u32 << n) {
        for (j, v) in values.iter_mut().enumerate() {
            *v = bits >> j & 1 == 1;
        }
        if cnf.first_unsatisfied(&values).is_none() {
            return Ok(Some(values));
        }
    }
    Ok(None)
}

/// A uniformly shuffled (2,2)-E3 formula on `n` variables; `n` must be a
/// positive multiple of 3.
pub fn random_cnf22e3(seed: u64, n: usize) -> Result<Cnf22e3> {
    if n == 0 || n % 3 != 0 {
        return Err(Error::Parameter(format!(
            "(2,2)-E3 formulas need a positive multiple of 3 variables, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<Literal> = (0..n)
        .flat_map(|v| [Literal::pos(v), Literal::pos(v), Literal::neg(v), Literal::neg(v)])
        .collect();
    loop {
        slots.shuffle(&mut rng);
        let clauses: Vec<[Literal; 3]> = slots.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        let distinct = clauses
            .iter()
            .all(|c| c[0].var != c[1].var && c[0].var != c[2].var && c[1].var != c[2].var);
        if distinct {
            return Ok(Cnf22e3 {
                num_vars: n,
                clauses,
            });
        }
    }
}
