use super::SatInstance;
use crate::error::{Error, Result};

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::Dimacs {
        line,
        message: message.into(),
    }
}

/// Parse DIMACS CNF. Clauses may span lines; `c` lines are comments and a
/// lone `%` ends the input (a common trailer in benchmark files).
pub fn parse_dimacs(text: &str) -> Result<SatInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(malformed(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [_, "cnf", k, l] = parts.as_slice() else {
                return Err(malformed(line_no, "expected `p cnf <vars> <clauses>`"));
            };
            let k = k
                .parse()
                .map_err(|_| malformed(line_no, format!("bad variable count {k:?}")))?;
            let l = l
                .parse()
                .map_err(|_| malformed(line_no, format!("bad clause count {l:?}")))?;
            header = Some((k, l));
            continue;
        }
        if header.is_none() {
            return Err(malformed(line_no, "clause before the problem line"));
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| malformed(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }

    let Some((k, l)) = header else {
        return Err(malformed(last_line, "missing problem line"));
    };
    if !current.is_empty() {
        return Err(malformed(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != l {
        return Err(malformed(
            last_line,
            format!("header declares {l} clauses, found {}", clauses.len()),
        ));
    }
    SatInstance::new(k, &clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::Literal;

    #[test]
    fn single_clause() {
        let i = parse_dimacs("p cnf 3 1\n1 2 3 0").unwrap();
        assert_eq!(i.k(), 3);
        assert_eq!(i.l(), 1);
        assert!(i.clause(1).iter().all(|l| l.positive));
    }

    #[test]
    fn two_clauses_with_comments_and_wrapping() {
        let i = parse_dimacs("c hello\np cnf 3 2\n1 2\n3 0 -1 -2 -3 0\n%\n0\n").unwrap();
        assert_eq!(i.l(), 2);
        assert_eq!(i.clause(2)[0], Literal::new(1, false));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 -1 2 0").unwrap_err(),
            Error::TautologicalClause { clause: 1, var: 1 }
        );
        assert!(matches!(
            parse_dimacs("1 2 3 0"),
            Err(Error::Dimacs { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p dnf 3 1\n1 2 3 0"),
            Err(Error::Dimacs { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 2\n1 2 3 0"),
            Err(Error::Dimacs { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 2 3"),
            Err(Error::Dimacs { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 x 3 0"),
            Err(Error::Dimacs { line: 2, .. })
        ));
        assert_eq!(
            parse_dimacs("p cnf 3 1\n1 2 0").unwrap_err(),
            Error::ClauseArity { clause: 1, found: 2 }
        );
    }
}
