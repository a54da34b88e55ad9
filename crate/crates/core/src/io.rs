//! Native election files and PrefLib strict-complete-order input.
//!
//! Native format: a header line `m n`, then `n` lines each holding a
//! space-separated permutation of `1..=m`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::Election;

/// Upper bound on voters expanded from PrefLib multiplicities.
pub const MAX_PREFLIB_VOTERS: u64 = 10_000_000;

/// An election plus optional alternative names, indexed by candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedElection {
    pub election: Election,
    pub names: Option<Vec<String>>,
}

pub fn read_native(text: &str) -> Result<Election> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (line_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    let head = parse_numbers(line_no, header)?;
    let [m, n] = head[..] else {
        return Err(Error::parse(line_no, "header must be `m n`"));
    };
    let (m, n) = (m as usize, n as usize);
    if m == 0 || n == 0 {
        return Err(Error::EmptyElection);
    }
    let mut votes = Vec::with_capacity(n.min(1 << 20));
    let mut last_line = line_no;
    for (line_no, line) in lines {
        last_line = line_no;
        if line.is_empty() {
            continue;
        }
        if votes.len() == n {
            return Err(Error::parse(line_no, format!("more than {n} votes")));
        }
        let nums = parse_numbers(line_no, line)?;
        let vote = to_zero_based(line_no, m, nums)?;
        if vote.len() != m {
            return Err(Error::VoteLengthMismatch {
                vote: votes.len(),
                expected: m,
                found: vote.len(),
            });
        }
        votes.push(vote);
    }
    if votes.len() != n {
        return Err(Error::parse(
            last_line,
            format!("expected {n} votes, found {}", votes.len()),
        ));
    }
    Election::new(m, votes)
}

pub fn write_native(e: &Election) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", e.num_candidates(), e.num_voters());
    for vote in e.votes() {
        let mut first = true;
        for &c in vote.ranking() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", c + 1);
        }
        out.push('\n');
    }
    out
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::parse(line, format!("`{tok}` is not a nonnegative integer")))
        })
        .collect()
}

fn to_zero_based(line: usize, m: usize, nums: Vec<u64>) -> Result<Vec<usize>> {
    nums.into_iter()
        .map(|x| {
            if x == 0 || x > m as u64 {
                Err(Error::parse(
                    line,
                    format!("candidate {x} is outside 1..={m}"),
                ))
            } else {
                Ok(x as usize - 1)
            }
        })
        .collect()
}

/// Reads a PrefLib `.soc` file. Each data line `count: a,b,...` contributes
/// `count` identical votes, in file order.
pub fn read_preflib_soc(text: &str) -> Result<NamedElection> {
    let mut m: Option<usize> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut rows: Vec<(usize, u64, Vec<usize>)> = Vec::new();
    let mut total: u64 = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            read_metadata(line_no, meta.trim(), &mut m, &mut names)?;
            continue;
        }
        if line.contains('{') || line.contains('}') {
            return Err(Error::UnsupportedFormat(format!(
                "line {line_no}: tied alternatives are not supported"
            )));
        }
        let (count, order) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, "expected `count: a,b,...`"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, "bad multiplicity"))?;
        let order: Vec<u64> = order
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<u64>().map_err(|_| {
                    Error::parse(line_no, format!("`{tok}` is not an alternative number"))
                })
            })
            .collect::<Result<_>>()?;
        total = total
            .checked_add(count)
            .filter(|&t| t <= MAX_PREFLIB_VOTERS)
            .ok_or(Error::CapExceeded {
                what: "total voters",
                value: total.saturating_add(count),
                cap: MAX_PREFLIB_VOTERS,
            })?;
        let width = m.unwrap_or(order.len());
        let vote = to_zero_based(line_no, width, order)?;
        rows.push((line_no, count, vote));
    }

    if rows.is_empty() || total == 0 {
        return Err(Error::parse(
            text.lines().count().max(1),
            "no votes in data section",
        ));
    }
    let m = m.unwrap_or(rows[0].2.len());
    let mut votes = Vec::with_capacity(total as usize);
    for (line_no, count, vote) in rows {
        let mut distinct = vote.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != vote.len() || distinct.last().is_some_and(|&c| c >= m) {
            return Err(Error::parse(
                line_no,
                "alternative out of range or repeated",
            ));
        }
        if vote.len() != m {
            return Err(Error::IncompleteOrder { line: line_no });
        }
        for _ in 0..count {
            votes.push(vote.clone());
        }
    }
    let election = Election::new(m, votes)?;
    let names = if names.is_empty() {
        None
    } else {
        let mut table: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
        for (i, name) in names {
            if i >= 1 && i <= m {
                table[i - 1] = name;
            }
        }
        Some(table)
    };
    Ok(NamedElection { election, names })
}

fn read_metadata(
    line: usize,
    meta: &str,
    m: &mut Option<usize>,
    names: &mut Vec<(usize, String)>,
) -> Result<()> {
    let Some((key, value)) = meta.split_once(':') else {
        return Ok(());
    };
    let key = key.trim().to_ascii_uppercase();
    let value = value.trim();
    if key == "NUMBER ALTERNATIVES" {
        let count: usize = value
            .parse()
            .map_err(|_| Error::parse(line, "bad alternative count"))?;
        if count == 0 {
            return Err(Error::EmptyElection);
        }
        *m = Some(count);
    } else if let Some(idx) = key.strip_prefix("ALTERNATIVE NAME") {
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, "bad alternative index"))?;
        names.push((idx, value.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn native_examples() {
        let e = read_native("2 1\n1 2\n").unwrap();
        assert_eq!(e.num_candidates(), 2);
        assert_eq!(e.vote(0).ranking(), [0, 1]);
        let e = read_native("3 2\n1 2 3\n3 2 1\n").unwrap();
        assert_eq!(e.vote(1).ranking(), [2, 1, 0]);
        assert_eq!(
            read_native("2 1\n1 1\n"),
            Err(Error::NotAPermutation { vote: 0 })
        );
        assert!(matches!(
            read_native("3 1\n1 2\n"),
            Err(Error::VoteLengthMismatch { .. })
        ));
        assert!(matches!(
            read_native("3 1\n1 x 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_native("3 2\n1 2 3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(read_native("2 1\n2 1\n\n\n").is_ok());
    }

    #[test]
    fn native_writer_format() {
        let e = Election::unanimous(3, 2).unwrap();
        assert_eq!(write_native(&e), "3 2\n1 2 3\n1 2 3\n");
    }

    #[test]
    fn preflib_multiplicity() {
        let text = "# NUMBER ALTERNATIVES: 2\n# ALTERNATIVE NAME 1: Ann\n# ALTERNATIVE NAME 2: Bo\n2: 1,2\n1: 2,1\n";
        let named = read_preflib_soc(text).unwrap();
        let rankings: Vec<&[usize]> = named.election.votes().iter().map(|v| v.ranking()).collect();
        assert_eq!(rankings, vec![&[0, 1][..], &[0, 1], &[1, 0]]);
        assert_eq!(named.names, Some(vec!["Ann".to_string(), "Bo".to_string()]));
    }

    #[test]
    fn preflib_errors() {
        assert!(matches!(
            read_preflib_soc("# NUMBER ALTERNATIVES: 2\n1: {1,2}\n"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            read_preflib_soc("# NUMBER ALTERNATIVES: 3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_preflib_soc("# NUMBER ALTERNATIVES: 3\n1: 1,2\n"),
            Err(Error::IncompleteOrder { line: 2 })
        ));
        assert!(matches!(
            read_preflib_soc("9999999: 1,2\n9999999: 2,1\n"),
            Err(Error::CapExceeded { .. })
        ));
    }

    proptest! {
        #[test]
        fn parsers_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let text = String::from_utf8_lossy(&bytes);
            let _ = read_native(&text);
            let _ = read_preflib_soc(&text);
        }

        #[test]
        fn parsers_never_panic_on_near_valid_text(
            text in "[0-9 :,#{}\n]{0,60}"
        ) {
            let _ = read_native(&text);
            let _ = read_preflib_soc(&text);
        }
    }
}
