//! Plain-text problem dumps for debugging.
//!
//! ```text
//! sdp 1
//! vars <m>
//! blocks <k> <size_1> ... <size_k>
//! objective <c_1> ... <c_m>
//! const <block> <row> <col> <value>           one per nonzero, row <= col
//! coef <var> <block> <row> <col> <value>      one per nonzero, row <= col
//! eq <rhs> <a_1> ... <a_m>                    one per equality row
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Floats are written
//! with Rust's shortest round-trip formatting, so a dump reloads exactly.

use std::fmt::Write as _;

use crate::error::{Result, SdpError};
use crate::problem::SdpProblem;

pub fn dump(p: &SdpProblem) -> String {
    let mut out = String::from("sdp 1\n");
    let _ = writeln!(out, "vars {}", p.num_vars());
    let _ = write!(out, "blocks {}", p.block_sizes().len());
    for s in p.block_sizes() {
        let _ = write!(out, " {s}");
    }
    out.push_str("\nobjective");
    for c in p.objective().iter() {
        let _ = write!(out, " {c:?}");
    }
    out.push('\n');
    for (b, m) in p.constant().iter().enumerate() {
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                if m[(i, j)] != 0.0 {
                    let _ = writeln!(out, "const {b} {i} {j} {:?}", m[(i, j)]);
                }
            }
        }
    }
    for v in 0..p.num_vars() {
        for e in p.coefficients(v) {
            let _ = writeln!(out, "coef {v} {} {} {} {:?}", e.block, e.row, e.col, e.value);
        }
    }
    for r in 0..p.num_equalities() {
        let _ = write!(out, "eq {:?}", p.eq_rhs()[r]);
        for a in p.eq_matrix().row(r).iter() {
            let _ = write!(out, " {a:?}");
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> SdpError {
    SdpError::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

pub fn load(text: &str) -> Result<SdpProblem> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
    if header != "sdp 1" {
        return Err(parse_err(n, "expected header `sdp 1`"));
    }
    let (n, vars_line) = lines.next().ok_or_else(|| parse_err(n, "missing `vars`"))?;
    let mut tok = vars_line.split_whitespace();
    if tok.next() != Some("vars") {
        return Err(parse_err(n, "expected `vars`"));
    }
    let m: usize = field(tok.next(), n, "variable count")?;

    let (n, blocks_line) = lines.next().ok_or_else(|| parse_err(n, "missing `blocks`"))?;
    let mut tok = blocks_line.split_whitespace();
    if tok.next() != Some("blocks") {
        return Err(parse_err(n, "expected `blocks`"));
    }
    let k: usize = field(tok.next(), n, "block count")?;
    let sizes = (0..k).map(|_| field::<usize>(tok.next(), n, "block size")).collect::<Result<Vec<_>>>()?;
    let mut p = SdpProblem::new(sizes, m);

    let at = |line: usize| move |e: SdpError| parse_err(line, e.to_string());
    for (n, l) in lines {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("objective") => {
                for v in 0..m {
                    let c: f64 = field(tok.next(), n, "objective coefficient")?;
                    p.set_objective(v, c).map_err(at(n))?;
                }
            }
            Some("const") => {
                let b = field(tok.next(), n, "block")?;
                let i = field(tok.next(), n, "row")?;
                let j = field(tok.next(), n, "col")?;
                let v = field(tok.next(), n, "value")?;
                p.add_constant(b, i, j, v).map_err(at(n))?;
            }
            Some("coef") => {
                let var = field(tok.next(), n, "variable")?;
                let b = field(tok.next(), n, "block")?;
                let i = field(tok.next(), n, "row")?;
                let j = field(tok.next(), n, "col")?;
                let v = field(tok.next(), n, "value")?;
                p.add_coefficient(var, b, i, j, v).map_err(at(n))?;
            }
            Some("eq") => {
                let rhs: f64 = field(tok.next(), n, "right-hand side")?;
                let terms = (0..m)
                    .map(|v| Ok((v, field::<f64>(tok.next(), n, "equality coefficient")?)))
                    .collect::<Result<Vec<_>>>()?;
                p.add_equality(&terms, rhs).map_err(at(n))?;
            }
            Some(other) => return Err(parse_err(n, format!("unknown record `{other}`"))),
            None => {}
        }
        if tok.next().is_some() {
            return Err(parse_err(n, "trailing fields"));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut p = SdpProblem::new(vec![2, 1], 2);
        p.set_objective(0, 1.0).unwrap();
        p.add_constant(0, 0, 1, 0.1 + 0.2).unwrap();
        p.add_constant(1, 0, 0, 1.0 / 3.0).unwrap();
        p.add_coefficient(0, 0, 0, 0, -1.0).unwrap();
        p.add_coefficient(1, 1, 0, 0, 2.5e-17).unwrap();
        p.add_equality(&[(0, 1.0), (1, -1.0)], 0.0).unwrap();
        assert_eq!(load(&dump(&p)).unwrap(), p);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "sdp 1\nvars 1\nblocks 1 2\n\ncoef 0 0 5 0 1.0\n";
        match load(text) {
            Err(SdpError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
