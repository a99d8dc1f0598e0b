//! Text formats for instances and matchings.
//!
//! Instance:
//!
//! ```text
//! applicants 3
//! posts 3
//! a 0 : 0 1        # a0 prefers post0 > post1
//! a 1 : 1
//! a 2 : 0 1 2
//! b 0 : tie        # single tie over all neighbours
//! b 1 : strict 2 1 0
//! ```
//!
//! Posts without a `b` line are single ties. Every applicant needs an `a`
//! line with at least one post.
//!
//! Matching: one `a <i> <j>` line per pair, `a <i> -` for an unmatched
//! applicant. Applicants without a line are unmatched.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{ApplicantId, Instance, Matching, PostId, PostPolicy};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into tokens, treating `:` as a token of its own and
/// dropping everything after `#`.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() || ch == ':' {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
            if ch == ':' {
                out.push(Token {
                    text: &line[i..i + 1],
                    column: line[..i].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn number(line: usize, tok: Token<'_>) -> Result<usize> {
    tok.text
        .parse()
        .map_err(|_| syntax(line, tok.column, format!("expected a number, found `{}`", tok.text)))
}

fn expect_end(line: usize, toks: &[Token<'_>], n: usize) -> Result<()> {
    match toks.get(n) {
        Some(t) => Err(syntax(line, t.column, format!("unexpected `{}`", t.text))),
        None => Ok(()),
    }
}

fn checked_id(line: usize, tok: Token<'_>, kind: &'static str, bound: usize) -> Result<usize> {
    let id = number(line, tok)?;
    if id >= bound {
        return Err(Error::DanglingId {
            line,
            kind,
            id,
            bound,
        });
    }
    Ok(id)
}

/// Parses raw bytes, which must be UTF-8.
pub fn parse_instance_bytes(bytes: &[u8]) -> Result<Instance> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&c| c == b'\n').count() + 1;
        syntax(line, 1, "input is not valid UTF-8")
    })?;
    parse_instance(text)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut num_applicants: Option<usize> = None;
    let mut num_posts: Option<usize> = None;
    let mut prefs: Vec<Option<Vec<PostId>>> = Vec::new();
    let mut policies: Vec<Option<PostPolicy>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokenize(raw);
        let Some(&head) = toks.first() else {
            continue;
        };
        match head.text {
            "applicants" | "posts" => {
                let tok = toks
                    .get(1)
                    .copied()
                    .ok_or_else(|| syntax(line, head.column, format!("`{}` needs a count", head.text)))?;
                let n = number(line, tok)?;
                expect_end(line, &toks, 2)?;
                let slot = if head.text == "applicants" {
                    &mut num_applicants
                } else {
                    &mut num_posts
                };
                if slot.is_some() {
                    return Err(syntax(line, head.column, format!("`{}` declared twice", head.text)));
                }
                *slot = Some(n);
                if head.text == "applicants" {
                    prefs = vec![None; n];
                } else {
                    policies = vec![None; n];
                }
            }
            "a" | "b" => {
                let (Some(na), Some(nb)) = (num_applicants, num_posts) else {
                    return Err(syntax(
                        line,
                        head.column,
                        "`applicants` and `posts` must be declared first",
                    ));
                };
                let id_tok = toks
                    .get(1)
                    .copied()
                    .ok_or_else(|| syntax(line, head.column, "missing id"))?;
                match toks.get(2) {
                    Some(t) if t.text == ":" => {}
                    Some(t) => return Err(syntax(line, t.column, format!("expected `:`, found `{}`", t.text))),
                    None => return Err(syntax(line, id_tok.column + id_tok.text.len(), "expected `:`")),
                }
                if head.text == "a" {
                    let a = checked_id(line, id_tok, "applicant", na)?;
                    if prefs[a].is_some() {
                        return Err(syntax(line, id_tok.column, format!("applicant {a} declared twice")));
                    }
                    let mut list = Vec::new();
                    for &t in &toks[3..] {
                        let b = checked_id(line, t, "post", nb)?;
                        if list.contains(&PostId(b)) {
                            return Err(Error::DuplicateRank {
                                line,
                                kind: "applicant",
                                owner: a,
                                entry: b,
                            });
                        }
                        list.push(PostId(b));
                    }
                    if list.is_empty() {
                        return Err(Error::EmptyPreferenceList(a));
                    }
                    prefs[a] = Some(list);
                } else {
                    let b = checked_id(line, id_tok, "post", nb)?;
                    if policies[b].is_some() {
                        return Err(syntax(line, id_tok.column, format!("post {b} declared twice")));
                    }
                    let kind = toks
                        .get(3)
                        .copied()
                        .ok_or_else(|| syntax(line, id_tok.column, "expected `tie` or `strict`"))?;
                    let policy = match kind.text {
                        "tie" => {
                            expect_end(line, &toks, 4)?;
                            PostPolicy::SingleTie
                        }
                        "strict" => {
                            let mut list = Vec::new();
                            for &t in &toks[4..] {
                                let a = checked_id(line, t, "applicant", na)?;
                                if list.contains(&ApplicantId(a)) {
                                    return Err(Error::DuplicateRank {
                                        line,
                                        kind: "post",
                                        owner: b,
                                        entry: a,
                                    });
                                }
                                list.push(ApplicantId(a));
                            }
                            PostPolicy::Strict(list)
                        }
                        other => {
                            return Err(syntax(
                                line,
                                kind.column,
                                format!("expected `tie` or `strict`, found `{other}`"),
                            ))
                        }
                    };
                    policies[b] = Some(policy);
                }
            }
            other => {
                return Err(syntax(line, head.column, format!("unknown directive `{other}`")));
            }
        }
    }

    let (Some(_), Some(nb)) = (num_applicants, num_posts) else {
        return Err(syntax(last_line + 1, 1, "missing `applicants` or `posts` header"));
    };
    if nb == 0 {
        return Err(Error::NoPosts);
    }
    let prefs = prefs
        .into_iter()
        .enumerate()
        .map(|(a, l)| l.ok_or(Error::EmptyPreferenceList(a)))
        .collect::<Result<Vec<_>>>()?;
    let policies = policies
        .into_iter()
        .map(|p| p.unwrap_or(PostPolicy::SingleTie))
        .collect();
    Instance::new(prefs, policies)
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "applicants {}", inst.num_applicants());
    let _ = writeln!(out, "posts {}", inst.num_posts());
    for a in inst.applicants() {
        let _ = write!(out, "a {} :", a.0);
        for b in inst.prefs(a) {
            let _ = write!(out, " {}", b.0);
        }
        out.push('\n');
    }
    for b in inst.posts() {
        match inst.policy(b) {
            PostPolicy::SingleTie => {
                let _ = writeln!(out, "b {} : tie", b.0);
            }
            PostPolicy::Strict(list) => {
                let _ = write!(out, "b {} : strict", b.0);
                for a in list {
                    let _ = write!(out, " {}", a.0);
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching> {
    let mut pairs = Vec::new();
    let mut seen = vec![false; inst.num_applicants()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(raw);
        let Some(&head) = toks.first() else {
            continue;
        };
        if head.text != "a" {
            return Err(syntax(line, head.column, format!("expected `a`, found `{}`", head.text)));
        }
        let (Some(&at), Some(&bt)) = (toks.get(1), toks.get(2)) else {
            return Err(syntax(line, head.column, "expected `a <applicant> <post|->`"));
        };
        expect_end(line, &toks, 3)?;
        let a = checked_id(line, at, "applicant", inst.num_applicants())?;
        if std::mem::replace(&mut seen[a], true) {
            return Err(syntax(line, at.column, format!("applicant {a} listed twice")));
        }
        if bt.text == "-" {
            continue;
        }
        let b = checked_id(line, bt, "post", inst.num_posts())?;
        pairs.push((ApplicantId(a), PostId(b)));
    }
    Matching::from_pairs(inst, pairs)
}

/// One line per applicant, matched or not.
pub fn serialize_matching(m: &Matching) -> String {
    let mut out = String::new();
    for a in 0..m.num_applicants() {
        match m.post_of(ApplicantId(a)) {
            Some(b) => {
                let _ = writeln!(out, "a {a} {}", b.0);
            }
            None => {
                let _ = writeln!(out, "a {a} -");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Rank;

    const TOP_LEFT: &str = "\
# three applicants, single-tie posts
applicants 3
posts 3
a 0 : 0 1
a 1 : 0 1
a 2 : 0 1 2
";

    #[test]
    fn parses_top_left() {
        let inst = parse_instance(TOP_LEFT).unwrap();
        assert_eq!(inst.num_applicants(), 3);
        assert_eq!(inst.num_posts(), 3);
        assert_eq!(inst.prefs(ApplicantId(2)), &[PostId(0), PostId(1), PostId(2)]);
        assert!(inst.all_ties());
        assert_eq!(inst.r_rank(ApplicantId(2)), Rank::Finite(2));
    }

    #[test]
    fn strict_posts_and_comments() {
        let text = "applicants 3\nposts 2\na 0 : 0 1 # c\na 1 : 1\na 2:0 1\nb 0 : tie\nb 1 : strict 2 0 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(
            inst.policy(PostId(1)),
            &PostPolicy::Strict(vec![ApplicantId(2), ApplicantId(0), ApplicantId(1)])
        );
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn error_cases() {
        let empty = "applicants 1\nposts 1\na 0 :\n";
        assert_eq!(parse_instance(empty).unwrap_err(), Error::EmptyPreferenceList(0));
        let missing = "applicants 2\nposts 1\na 0 : 0\n";
        assert_eq!(parse_instance(missing).unwrap_err(), Error::EmptyPreferenceList(1));
        let asym = "applicants 2\nposts 2\na 0 : 0\na 1 : 1\nb 0 : strict 0 1\n";
        assert!(matches!(parse_instance(asym), Err(Error::Symmetry { post: 0, .. })));
        let dangling = "applicants 1\nposts 1\na 0 : 3\n";
        assert!(matches!(
            parse_instance(dangling),
            Err(Error::DanglingId { line: 3, id: 3, .. })
        ));
        let dup = "applicants 1\nposts 2\na 0 : 1 1\n";
        assert!(matches!(parse_instance(dup), Err(Error::DuplicateRank { line: 3, .. })));
        let bad = "applicants 1\nposts 1\na 0 0\n";
        assert!(matches!(
            parse_instance(bad),
            Err(Error::Syntax { line: 3, column: 5, .. })
        ));
        let zero = "applicants 0\nposts 0\n";
        assert_eq!(parse_instance(zero).unwrap_err(), Error::NoPosts);
        assert!(matches!(
            parse_instance("posts 1\na 0 : 0\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance_bytes(b"applicants 1\n\xff"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn matching_round_trip() {
        let inst = parse_instance(TOP_LEFT).unwrap();
        let m = parse_matching("a 0 0\na 1 1\na 2 -\n", &inst).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(parse_matching(&serialize_matching(&m), &inst).unwrap(), m);
        assert!(parse_matching("a 0 2\n", &inst).is_err());
        assert!(parse_matching("a 0 0\na 0 1\n", &inst).is_err());
        assert!(parse_matching("x 0 0\n", &inst).is_err());
        assert!(parse_matching("a 0\n", &inst).is_err());
    }
}
