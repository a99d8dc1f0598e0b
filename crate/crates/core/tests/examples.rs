use popmatch::gen::{self, Fixture};
use popmatch::oracle;
use popmatch::solver::{self, PostClass, Solution};
use popmatch::{verifier, Matching, PostId};

fn names(f: &Fixture, posts: Vec<PostId>) -> Vec<&str> {
    let mut v = f.post_names(&posts);
    v.sort();
    v
}

fn helper_edges(f: &Fixture, sol: &Solution) -> Vec<(String, String)> {
    let mut v: Vec<_> = sol
        .helper
        .real_edges()
        .into_iter()
        .map(|(a, b)| (f.labels.applicant(a).to_string(), f.labels.post(b).to_string()))
        .collect();
    v.sort();
    v
}

fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut v: Vec<_> = list.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    v.sort();
    v
}

#[test]
fn top_left() {
    let f = gen::fixture("fig1_top_left").unwrap();
    let sol = solver::solve_detailed(&f.instance).unwrap();
    assert_eq!(names(&f, sol.partition.x()), ["b1"]);
    assert_eq!(names(&f, sol.partition.y()), ["b2"]);
    assert_eq!(names(&f, sol.partition.z()), ["b3"]);
    assert_eq!(
        helper_edges(&f, &sol),
        pairs(&[("a1", "b1"), ("a2", "b1"), ("a1", "b2"), ("a2", "b2"), ("a3", "b2"), ("a3", "b3")])
    );
    assert_eq!(sol.trace.iteration_count(), 2);
    let m = sol.outcome.matching().unwrap();
    assert_eq!(verifier::margin(&f.instance, m).unwrap().margin, 0);

    let highlighted = f.matching(&[("a1", "b1"), ("a2", "b2"), ("a3", "b3")]).unwrap();
    assert!(oracle::popular_set(&f.instance).unwrap().contains(&highlighted));
    assert_eq!(oracle::enumerate_matchings(&f.instance).unwrap().len(), 20);
}

#[test]
fn bottom_left() {
    let f = gen::fixture("fig1_bottom_left").unwrap();
    let sol = solver::solve_detailed(&f.instance).unwrap();
    assert!(!sol.outcome.is_popular());
    assert_eq!(sol.trace.iteration_count(), 3);
    assert!(sol.partition.x().is_empty());
    assert_eq!(names(&f, sol.partition.y()), ["b1"]);
    assert_eq!(names(&f, sol.partition.z()), ["b2", "b3"]);
    assert!(oracle::popular_set(&f.instance).unwrap().is_empty());
    for m in oracle::enumerate_matchings(&f.instance).unwrap() {
        assert!(verifier::margin(&f.instance, &m).unwrap().margin >= 1);
    }
}

#[test]
fn middle() {
    let f = gen::fixture("fig1_middle").unwrap();
    let inst = &f.instance;
    assert_eq!(names(&f, inst.f_set().into_iter().collect()), ["b0", "b1"]);
    let a3 = f.labels.applicant_id("a3").unwrap();
    assert_eq!(inst.r_rank(a3).finite(), Some(3));
    let m = f
        .matching(&[("a0", "b3"), ("a1", "b1"), ("a2", "b2"), ("a3", "b0")])
        .unwrap();
    assert!(verifier::is_popular(inst, &m).unwrap());
    let solved = solver::solve(inst).unwrap();
    assert_eq!(verifier::margin(inst, solved.matching().unwrap()).unwrap().margin, 0);
}

fn right_matchings(f: &Fixture) -> [Matching; 3] {
    let red = [("a1", "b1"), ("a2", "b2"), ("a3", "b3"), ("x1", "y2"), ("x2", "y1")];
    let green = [("a1", "b2"), ("a2", "b1"), ("a3", "b3"), ("x1", "y1"), ("x2", "y2")];
    let union = [("a1", "b1"), ("a2", "b2"), ("a3", "b3"), ("x1", "y1"), ("x2", "y2")];
    [red, green, union].map(|p| f.matching(&p).unwrap())
}

#[test]
fn right_red_green_and_union() {
    let f = gen::fixture("fig1_right").unwrap();
    let inst = &f.instance;
    let [red, green, union] = right_matchings(&f);
    let popular = oracle::popular_set(inst).unwrap();
    assert!(popular.contains(&red));
    assert!(popular.contains(&green));
    assert!(!popular.contains(&union));
    assert_eq!(verifier::margin(inst, &red).unwrap().margin, 0);
    assert_eq!(verifier::margin(inst, &green).unwrap().margin, 0);

    let margin = verifier::margin(inst, &union).unwrap().margin;
    assert!(margin >= 1);
    assert_eq!(margin, oracle::brute_margin(inst, &union).unwrap());
    let (for_red, for_union) = verifier::score(inst, &red, &union).unwrap();
    assert_eq!((for_red, for_union), oracle::brute_score(inst, &red, &union));
    assert!(for_union <= for_red);
}

#[test]
fn right_solver_run() {
    // The loop settles after two rounds with y2 still in Y: x2 keeps its
    // top edge to y1, so y1 stays in X.
    let f = gen::fixture("fig1_right").unwrap();
    let sol = solver::solve_detailed(&f.instance).unwrap();
    assert_eq!(names(&f, sol.partition.x()), ["b1", "y1"]);
    assert_eq!(names(&f, sol.partition.y()), ["b2", "y2"]);
    assert_eq!(names(&f, sol.partition.z()), ["b3", "y3"]);
    assert_eq!(sol.trace.iteration_count(), 2);
    let h = helper_edges(&f, &sol);
    assert!(!h.contains(&("a3".into(), "b1".into())));
    assert!(!h.contains(&("x1".into(), "y1".into())));
    let [red, _, _] = right_matchings(&f);
    for (a, b) in red.pairs() {
        assert!(h.contains(&(f.labels.applicant(a).into(), f.labels.post(b).into())));
    }
    let m = sol.outcome.matching().unwrap();
    assert_eq!(verifier::margin(&f.instance, m).unwrap().margin, 0);
    assert_eq!(sol.partition.class_of(f.labels.post_id("y3").unwrap()), PostClass::Z);
}

#[test]
fn tight_family_popular_matching() {
    for n in 1..=8 {
        let t = gen::tight_family(n).unwrap();
        let mut list = vec![("a0".to_string(), "f0".to_string())];
        for i in 1..=n {
            list.push((format!("a{i}"), format!("f{i}")));
            list.push((format!("a'{i}"), format!("s{i}")));
        }
        let borrowed: Vec<(&str, &str)> = list.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let m = t.matching(&borrowed).unwrap();
        assert!(verifier::is_popular(&t.instance, &m).unwrap(), "n = {n}");
        if n <= 3 {
            assert!(oracle::popular_set(&t.instance).unwrap().contains(&m));
        }
        let a0 = t.labels.applicant_id("a0").unwrap();
        assert_eq!(t.labels.post(t.instance.f_post(a0)), "f0");
        let sol = solver::solve_detailed(&t.instance).unwrap();
        assert!(sol.outcome.is_popular());
        assert_eq!(sol.trace.iteration_count(), n + 1);
    }
}
