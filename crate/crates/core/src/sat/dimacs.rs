use std::fmt::Write;

use super::{Cnf, Lit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed `p cnf` header")]
    Header(usize),
    #[error("line {line}: bad literal `{token}`")]
    Literal { line: usize, token: String },
    #[error("literal {lit} exceeds declared variable count {vars}")]
    VarOutOfRange { lit: i32, vars: u32 },
    #[error("declared {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
}

pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Reads DIMACS CNF. Clauses may span lines; `c` lines are comments.
pub fn parse_dimacs(src: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut cnf = Cnf::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut pending = false;
    let mut found = 0usize;
    for (i, line) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::Header(line_no));
            }
            let vars = parts[2].parse().map_err(|_| DimacsError::Header(line_no))?;
            let clauses = parts[3].parse().map_err(|_| DimacsError::Header(line_no))?;
            header = Some((vars, clauses));
            cnf.num_vars = vars;
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::Header(line_no));
        };
        for tok in line.split_whitespace() {
            let x: i32 = tok.parse().map_err(|_| DimacsError::Literal {
                line: line_no,
                token: tok.to_string(),
            })?;
            if x == 0 {
                found += 1;
                cnf.add_clause(current.drain(..));
                pending = false;
                continue;
            }
            let lit = Lit::from_dimacs(x).ok_or(DimacsError::Literal {
                line: line_no,
                token: tok.to_string(),
            })?;
            if lit.var() > vars {
                return Err(DimacsError::VarOutOfRange { lit: x, vars });
            }
            current.push(lit);
            pending = true;
        }
    }
    let Some((_, declared)) = header else {
        return Err(DimacsError::Header(0));
    };
    if pending {
        return Err(DimacsError::Unterminated);
    }
    if found != declared {
        return Err(DimacsError::ClauseCount { declared, found });
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "c example\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n";
        let cnf = parse_dimacs(src).unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses.len(), 2);
        assert_eq!(parse_dimacs(&to_dimacs(&cnf)).unwrap(), cnf);
        assert_eq!(to_dimacs(&cnf).lines().next(), Some("p cnf 3 2"));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("1 0\n"), Err(DimacsError::Header(1)));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::VarOutOfRange { .. })
        ));
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(DimacsError::Unterminated)
        );
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 2 0\n"),
            Err(DimacsError::ClauseCount { .. })
        ));
    }
}
