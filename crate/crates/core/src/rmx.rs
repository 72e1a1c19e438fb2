// SPDX-License-Identifier: Apache-2.0

//! Text formats for matrices, code descriptors, staircase plans and
//! preprocessed responses.
//!
//! Every extension element is written as its power-basis coordinates
//! `v1:v2:...:vm`, constant term first, each v_i being the integer encoding
//! of an F_q element. Base-field matrices are RMX1 files with `m=1` and
//! `extpoly=0,1`. Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::codes::{Family, LinearCode};
use crate::error::{Error, Result};
use crate::field::{BaseField, ExtElement, FieldTower, Fq, TowerPolys};
use crate::matrix::{BaseMatrix, ExtMatrix, Matrix};
use crate::staircase::{ChainFamily, Responses, StaircasePlan};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(parse_err(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn finish(mut self) -> Result<()> {
        match self.inner.next() {
            Some((n, _)) => Err(parse_err(n, "trailing content")),
            None => Ok(()),
        }
    }
}

/// `key=value` tokens after a magic word.
struct Header<'a> {
    line: usize,
    fields: HashMap<&'a str, &'a str>,
}

impl<'a> Header<'a> {
    fn parse(line: usize, text: &'a str, magic: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        if tokens.next() != Some(magic) {
            return Err(parse_err(line, format!("expected a {magic} header")));
        }
        let mut fields = HashMap::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| parse_err(line, format!("token `{tok}` is not key=value")))?;
            if fields.insert(k, v).is_some() {
                return Err(parse_err(line, format!("duplicate key `{k}`")));
            }
        }
        Ok(Header { line, fields })
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.fields.get(key).copied().ok_or_else(|| parse_err(self.line, format!("missing key `{key}`")))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.str(key)?;
        v.parse().map_err(|_| parse_err(self.line, format!("bad value `{v}` for `{key}`")))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let v = self.str(key)?;
        v.split(',')
            .map(|x| x.parse().map_err(|_| parse_err(self.line, format!("bad entry `{x}` in `{key}`"))))
            .collect()
    }

    fn tower(&self) -> Result<FieldTower> {
        let p = self.num("p")?;
        let s = self.num("s")?;
        let m = self.num("m")?;
        let polys = TowerPolys { base_poly: self.list("basepoly")?, ext_poly: self.list("extpoly")? };
        FieldTower::new(p, s, m, Some(&polys)).map_err(|e| parse_err(self.line, e.to_string()))
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn tower_fields(tower: &FieldTower) -> String {
    format!("p={} s={} m={} {}", tower.p(), tower.s(), tower.m(), poly_fields(tower))
}

fn poly_fields(tower: &FieldTower) -> String {
    let polys = tower.polys();
    format!("basepoly={} extpoly={}", join(&polys.base_poly, ","), join(&polys.ext_poly, ","))
}

fn element_token(x: &ExtElement) -> String {
    join(x.coeffs(), ":")
}

fn parse_element(tower: &FieldTower, line: usize, tok: &str) -> Result<ExtElement> {
    let coords = tok
        .split(':')
        .map(|v| v.parse::<Fq>().map_err(|_| parse_err(line, format!("bad coordinate in `{tok}`"))))
        .collect::<Result<Vec<_>>>()?;
    tower.element(&coords).map_err(|e| parse_err(line, format!("entry `{tok}`: {e}")))
}

fn same_tower(a: &FieldTower, b: &FieldTower) -> bool {
    a.p() == b.p() && a.s() == b.s() && a.m() == b.m() && a.polys() == b.polys()
}

fn write_matrix_into(out: &mut String, tower: &FieldTower, x: &ExtMatrix) {
    let _ = writeln!(
        out,
        "RMX1 p={} s={} m={} rows={} cols={} {}",
        tower.p(),
        tower.s(),
        tower.m(),
        x.rows(),
        x.cols(),
        poly_fields(tower)
    );
    for r in 0..x.rows() {
        let row: Vec<String> = x.row(r).iter().map(element_token).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn read_matrix_from(lines: &mut Lines<'_>, expect: Option<&FieldTower>) -> Result<(FieldTower, ExtMatrix)> {
    let (n, text) = lines.next_line("an RMX1 header")?;
    let header = Header::parse(n, text, "RMX1")?;
    let tower = header.tower()?;
    if let Some(t) = expect {
        if !same_tower(t, &tower) {
            return Err(parse_err(n, "field parameters differ from the expected tower"));
        }
    }
    let rows: usize = header.num("rows")?;
    let cols: usize = header.num("cols")?;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (ln, text) = lines.next_line("a matrix row")?;
        let before = data.len();
        for tok in text.split_whitespace() {
            data.push(parse_element(&tower, ln, tok)?);
        }
        if data.len() - before != cols {
            return Err(parse_err(ln, format!("expected {cols} entries, found {}", data.len() - before)));
        }
    }
    let x = Matrix::from_vec(rows, cols, data).map_err(|e| parse_err(n, e.to_string()))?;
    Ok((tower, x))
}

pub fn write_ext_matrix(tower: &FieldTower, x: &ExtMatrix) -> String {
    let mut out = String::new();
    write_matrix_into(&mut out, tower, x);
    out
}

/// Parses an RMX1 file, constructing the tower its header describes.
pub fn read_ext_matrix(text: &str) -> Result<(FieldTower, ExtMatrix)> {
    let mut lines = Lines::new(text);
    let out = read_matrix_from(&mut lines, None)?;
    lines.finish()?;
    Ok(out)
}

/// Parses an RMX1 file whose header must describe `tower`.
pub fn read_ext_matrix_in(tower: &FieldTower, text: &str) -> Result<ExtMatrix> {
    let mut lines = Lines::new(text);
    let (_, x) = read_matrix_from(&mut lines, Some(tower))?;
    lines.finish()?;
    Ok(x)
}

fn base_as_tower(f: &BaseField) -> Result<FieldTower> {
    let polys = TowerPolys { base_poly: f.poly().to_vec(), ext_poly: vec![0, 1] };
    FieldTower::new(f.characteristic(), f.degree(), 1, Some(&polys))
}

pub fn write_base_matrix(f: &BaseField, x: &BaseMatrix) -> Result<String> {
    let tower = base_as_tower(f)?;
    let lifted = x.map(|&v| tower.from_base(v));
    Ok(write_ext_matrix(&tower, &lifted))
}

pub fn read_base_matrix(text: &str) -> Result<(BaseField, BaseMatrix)> {
    let mut lines = Lines::new(text);
    let (n, first) = lines.next_line("an RMX1 header")?;
    let header = Header::parse(n, first, "RMX1")?;
    if header.num::<usize>("m")? != 1 || header.list::<Fq>("extpoly")? != [0, 1] {
        return Err(parse_err(n, "base-field matrices need m=1 and extpoly=0,1"));
    }
    let (tower, x) = read_ext_matrix(text)?;
    Ok((tower.base().clone(), x.map(|e| e.coeffs()[0])))
}

/// `TOWER p=.. s=.. m=.. basepoly=.. extpoly=..`
pub fn write_tower_line(tower: &FieldTower) -> String {
    format!("TOWER {}\n", tower_fields(tower))
}

pub fn read_tower_line(text: &str) -> Result<FieldTower> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_line("a TOWER line")?;
    let tower = Header::parse(n, line, "TOWER")?.tower()?;
    lines.finish()?;
    Ok(tower)
}

/// GAB1 descriptor of a Gabidulin code; `basis` lists its evaluation points.
pub fn write_code_descriptor(code: &LinearCode) -> Result<String> {
    let Family::Gabidulin { points } = code.family() else {
        return Err(Error::Unsupported("GAB1 describes Gabidulin codes only".into()));
    };
    let pts: Vec<String> = points.iter().map(element_token).collect();
    Ok(format!(
        "GAB1 {} n={} k={} basis={}\n",
        tower_fields(code.tower()),
        code.n(),
        code.dim(),
        pts.join(",")
    ))
}

pub fn read_code_descriptor(text: &str) -> Result<LinearCode> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_line("a GAB1 line")?;
    lines.finish()?;
    let header = Header::parse(n, line, "GAB1")?;
    let tower = Arc::new(header.tower()?);
    let len: usize = header.num("n")?;
    let k: usize = header.num("k")?;
    let points = header
        .str("basis")?
        .split(',')
        .map(|tok| parse_element(&tower, n, tok))
        .collect::<Result<Vec<_>>>()?;
    if points.len() != len {
        return Err(parse_err(n, format!("n = {len} but {} evaluation points", points.len())));
    }
    LinearCode::gabidulin_with_points(tower, points, k).map_err(|e| parse_err(n, e.to_string()))
}

/// STC1 plan line followed by the tower line. Product plans add `l=<l>` and
/// give k1, k2 per factor.
pub fn write_plan(plan: &StaircasePlan, tower: &FieldTower) -> String {
    let l = plan.l();
    let mut out = format!(
        "STC1 n={} k1={} k2={} t0={} D={}",
        plan.n,
        plan.k1 / l,
        plan.k2 / l,
        plan.t0,
        join(&plan.d_list, ",")
    );
    if let ChainFamily::Product { l } = plan.family {
        let _ = write!(out, " l={l}");
    }
    out.push('\n');
    out.push_str(&write_tower_line(tower));
    out
}

pub fn read_plan(text: &str) -> Result<(StaircasePlan, FieldTower)> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_line("an STC1 line")?;
    let header = Header::parse(n, line, "STC1")?;
    let (tn, tline) = lines.next_line("a TOWER line")?;
    let tower = Header::parse(tn, tline, "TOWER")?.tower()?;
    lines.finish()?;
    let len: usize = header.num("n")?;
    let k1 = header.num("k1")?;
    let k2 = header.num("k2")?;
    let t0 = header.num("t0")?;
    let d: Vec<usize> = header.list("D")?;
    let plan = match header.fields.get("l") {
        None => StaircasePlan::gabidulin(len, tower.m(), k1, k2, t0, &d),
        Some(_) => {
            let l: usize = header.num("l")?;
            if l * tower.m() != len {
                return Err(parse_err(n, format!("product plan needs n = l·m, got n = {len}")));
            }
            StaircasePlan::product(l, tower.m(), k1, k2, t0, &d)
        }
    }
    .map_err(|e| parse_err(n, e.to_string()))?;
    Ok((plan, tower))
}

/// `RSP1 d=<d> j=<j>` (j 1-based) followed by one `rows×1` RMX1 fragment per
/// contacted column.
pub fn write_responses(tower: &FieldTower, r: &Responses) -> String {
    let mut out = format!("RSP1 d={} j={}\n", r.d, r.level + 1);
    for c in 0..r.data.cols() {
        let col = r.data.submatrix(0..r.data.rows(), c..c + 1);
        write_matrix_into(&mut out, tower, &col);
    }
    out
}

pub fn read_responses(tower: &FieldTower, text: &str) -> Result<Responses> {
    let mut lines = Lines::new(text);
    let (n, line) = lines.next_line("an RSP1 header")?;
    let header = Header::parse(n, line, "RSP1")?;
    let d: usize = header.num("d")?;
    let j: usize = header.num("j")?;
    if j == 0 {
        return Err(parse_err(n, "j is 1-based"));
    }
    let mut cols = Vec::with_capacity(d);
    for _ in 0..d {
        let (_, col) = read_matrix_from(&mut lines, Some(tower))?;
        if col.cols() != 1 || cols.first().is_some_and(|c: &ExtMatrix| c.rows() != col.rows()) {
            return Err(parse_err(lines.last, "response fragments must be equal-height single columns"));
        }
        cols.push(col);
    }
    lines.finish()?;
    let rows = cols.first().map_or(0, Matrix::rows);
    let data = if d == 0 {
        Matrix::filled(rows, 0, tower.zero())
    } else {
        let mut acc = cols[0].clone();
        for c in &cols[1..] {
            acc = acc.hstack(c).map_err(|e| parse_err(n, e.to_string()))?;
        }
        acc
    };
    Ok(Responses { d, level: j - 1, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn random_matrix(tower: &FieldTower, rows: usize, cols: usize, seed: u64) -> ExtMatrix {
        let mut rng = trial_rng(seed, 0);
        let data = (0..rows * cols).map(|_| tower.random(&mut rng)).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn ext_matrix_round_trip_is_bit_exact() {
        for (p, s, m) in [(2, 1, 4), (3, 2, 5), (2, 8, 64), (5, 1, 1)] {
            let tower = FieldTower::new(p, s, m, None).unwrap();
            let x = random_matrix(&tower, 3, 4, u64::from(p) * 100 + m as u64);
            let text = write_ext_matrix(&tower, &x);
            let (t2, y) = read_ext_matrix(&text).unwrap();
            assert_eq!(y, x);
            assert!(same_tower(&tower, &t2));
            assert_eq!(write_ext_matrix(&t2, &y), text);
            assert_eq!(read_ext_matrix_in(&tower, &text).unwrap(), x);
        }
    }

    #[test]
    fn header_shape() {
        let tower = FieldTower::new(2, 1, 3, None).unwrap();
        let x = Matrix::from_vec(1, 2, vec![tower.one(), tower.monomial(2)]).unwrap();
        let text = write_ext_matrix(&tower, &x);
        let polys = tower.polys();
        assert_eq!(
            text,
            format!(
                "RMX1 p=2 s=1 m=3 rows=1 cols=2 basepoly={} extpoly={}\n1:0:0 0:0:1\n",
                join(&polys.base_poly, ","),
                join(&polys.ext_poly, ",")
            )
        );
    }

    #[test]
    fn base_matrix_round_trip() {
        let f = BaseField::new(3, 2, None).unwrap();
        let x = Matrix::from_vec(2, 3, vec![0, 1, 2, 3, 7, 8]).unwrap();
        let text = write_base_matrix(&f, &x).unwrap();
        assert!(text.contains(" m=1 ") && text.contains("extpoly=0,1"));
        let (g, y) = read_base_matrix(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(y, x);
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let tower = FieldTower::new(2, 1, 3, None).unwrap();
        let x = random_matrix(&tower, 2, 2, 5);
        let text = write_ext_matrix(&tower, &x);
        let short: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_ext_matrix(&short), Err(Error::Parse { line: 3, .. })));
        let bad = text.replacen("rows=2", "rows=x", 1);
        assert!(matches!(read_ext_matrix(&bad), Err(Error::Parse { line: 1, .. })));
        let wide = format!("{text}0:0:2 1:1:1\n");
        assert!(matches!(read_ext_matrix(&wide), Err(Error::Parse { line: 4, .. })));
        let other = FieldTower::new(2, 1, 4, None).unwrap();
        assert!(read_ext_matrix_in(&other, &text).is_err());
    }

    #[test]
    fn reducible_polynomial_is_rejected() {
        let text = "RMX1 p=2 s=1 m=2 rows=0 cols=0 basepoly=0,1 extpoly=1,0,1\n";
        assert!(matches!(read_ext_matrix(text), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn code_descriptor_reproduces_generator_and_parity() {
        let tower = Arc::new(FieldTower::new(2, 1, 6, None).unwrap());
        let code = LinearCode::gabidulin(tower, 5, 2).unwrap();
        for c in [code.clone(), code.dual()] {
            let text = write_code_descriptor(&c).unwrap();
            let back = read_code_descriptor(&text).unwrap();
            assert_eq!(back.generator(), c.generator());
            assert_eq!(back.parity(), c.parity());
            assert_eq!(write_code_descriptor(&back).unwrap(), text);
        }
        let product = LinearCode::product(code.tower().clone(), 2, 1).unwrap();
        assert!(matches!(write_code_descriptor(&product), Err(Error::Unsupported(_))));
    }

    #[test]
    fn plan_round_trip() {
        let cases = [
            (StaircasePlan::gabidulin(4, 4, 2, 1, 0, &[3, 4]).unwrap(), FieldTower::new(2, 1, 4, None).unwrap()),
            (StaircasePlan::product(2, 4, 2, 1, 0, &[6, 8]).unwrap(), FieldTower::new(2, 1, 4, None).unwrap()),
        ];
        for (plan, tower) in cases {
            let text = write_plan(&plan, &tower);
            let (p2, t2) = read_plan(&text).unwrap();
            assert_eq!(p2, plan);
            assert!(same_tower(&t2, &tower));
            assert_eq!(write_plan(&p2, &t2), text);
        }
    }

    #[test]
    fn responses_round_trip() {
        let tower = FieldTower::new(2, 1, 4, None).unwrap();
        let r = Responses { d: 3, level: 1, data: random_matrix(&tower, 2, 3, 9) };
        let text = write_responses(&tower, &r);
        assert!(text.starts_with("RSP1 d=3 j=2\n"));
        assert_eq!(text.matches("RMX1").count(), 3);
        assert_eq!(read_responses(&tower, &text).unwrap(), r);
    }
}
