//! Benchmark system generators and the `.gbsys` polynomial-system text
//! format.
//!
//! Format, line-oriented:
//!
//! ```text
//! # comment lines and blank lines are skipped
//! vars: x,y,z        # grevlex precedence: first listed is largest
//! char: 32003
//! x^2*y - 2*z + 1    # one polynomial per line
//! ```
//!
//! A term is an optional sign, then factors separated by optional `*`:
//! integer literals and `var[^exp]` powers. Whitespace is insignificant.
//! Negative coefficients map into GF(p).
//!
//! Generator families (variables `x1 > x2 > ... > xn`):
//!
//! * `cyclic-n`: for k < n the cyclic sums of k-fold products, plus
//!   `x1*...*xn - 1`.
//! * `katsura-n`: the symmetric convolution relations `sum_{i} u_|i| *
//!   u_|k-i| = u_k` (indices beyond n-1 vanish) plus the normalization
//!   `u_0 + 2*u_1 + ... + 2*u_{n-1} = 1`.
//! * `eco-n`: `(x_k + sum_{i=1}^{n-k-1} x_i * x_{i+k}) * x_n = k` for
//!   k < n, plus `x_1 + ... + x_{n-1} + 1`.
//! * `noon-n`: `10*x_i*(sum_{j != i} x_j^2) - 11*x_i + 10` for each i.
//! * `random-n-d[-seed]`: dense polynomials with every monomial of total
//!   degree <= d carrying a uniformly random nonzero coefficient;
//!   `count_factor * n` polynomials (square system by default).

use std::fmt::Write as _;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ffield::{Coeff, FieldError, PrimeField};
use crate::poly::{Monomial, Polynomial, MAX_VARS};

/// A parsed or generated polynomial system over a validated prime field.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub name: String,
    pub var_names: Vec<String>,
    pub field: PrimeField,
    pub polys: Vec<Polynomial>,
}

impl System {
    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.polys.iter().all(|p| p.is_homogeneous())
    }

    /// Homogenizes every generator with one fresh trailing variable. The new
    /// variable is named `h` unless taken, then `h0`, `h1`, ...
    pub fn homogenized(&self) -> System {
        let mut hname = String::from("h");
        let mut k = 0;
        while self.var_names.contains(&hname) {
            hname = format!("h{k}");
            k += 1;
        }
        let mut var_names = self.var_names.clone();
        var_names.push(hname);
        System {
            name: self.name.clone(),
            var_names,
            field: self.field,
            polys: self.polys.iter().map(|p| p.homogenized()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemsError {
    #[error("{family}-{n} needs n >= {min}")]
    BadParameter {
        family: &'static str,
        n: usize,
        min: usize,
    },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("unknown system name `{0}` (try cyclic-5, katsura-4, eco-4, noon-3, random-5-2-41)")]
    UnknownName(String),
    #[error("a generated coefficient vanished mod {0}; pick a larger characteristic")]
    DegenerateCoefficient(u64),
}

fn check_vars(family: &'static str, n: usize, min: usize) -> Result<(), SystemsError> {
    if n < min {
        return Err(SystemsError::BadParameter { family, n, min });
    }
    if n > MAX_VARS {
        return Err(SystemsError::TooManyVariables(n));
    }
    Ok(())
}

fn xvar_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// The n cyclic relations: for k = 1..n-1 the sum of all k-fold products of
/// cyclically consecutive variables, plus the full product minus one.
pub fn gen_cyclic(n: usize, field: &PrimeField) -> Result<System, SystemsError> {
    check_vars("cyclic", n, 2)?;
    let mut polys = Vec::with_capacity(n);
    for k in 1..n {
        let terms = (0..n).map(|i| {
            let mut exps = vec![0u16; n];
            for j in 0..k {
                exps[(i + j) % n] += 1;
            }
            (Monomial::new(&exps), Coeff::ONE)
        });
        polys.push(Polynomial::from_terms(n, field, terms));
    }
    polys.push(Polynomial::from_terms(
        n,
        field,
        [
            (Monomial::new(&vec![1u16; n]), Coeff::ONE),
            (Monomial::one(n), field.element_i64(-1)),
        ],
    ));
    Ok(System {
        name: format!("cyclic-{n}"),
        var_names: xvar_names(n),
        field: *field,
        polys,
    })
}

/// Katsura system in n variables u_0..u_{n-1} (u_j = 0 for j >= n):
/// convolution relations for k = 0..n-2 plus the coefficient-sum
/// normalization.
pub fn gen_katsura(n: usize, field: &PrimeField) -> Result<System, SystemsError> {
    check_vars("katsura", n, 2)?;
    let var = |i: usize| Monomial::var(i, n);
    let mut polys = Vec::with_capacity(n);
    for k in 0..n - 1 {
        let mut terms: Vec<(Monomial, Coeff)> = Vec::new();
        for i in -(n as i64 - 1)..=(n as i64 - 1) {
            let a = i.unsigned_abs() as usize;
            let b = (k as i64 - i).unsigned_abs() as usize;
            if a < n && b < n {
                terms.push((var(a).mul(&var(b)), Coeff::ONE));
            }
        }
        terms.push((var(k), field.element_i64(-1)));
        polys.push(Polynomial::from_terms(n, field, terms));
    }
    let mut norm: Vec<(Monomial, Coeff)> = vec![(var(0), Coeff::ONE)];
    for i in 1..n {
        norm.push((var(i), field.element(2)));
    }
    norm.push((Monomial::one(n), field.element_i64(-1)));
    polys.push(Polynomial::from_terms(n, field, norm));
    Ok(System {
        name: format!("katsura-{n}"),
        var_names: xvar_names(n),
        field: *field,
        polys,
    })
}

/// Economics system: `(x_k + sum x_i*x_{i+k}) * x_n - k` for k = 1..n-1,
/// plus `x_1 + ... + x_{n-1} + 1`.
pub fn gen_eco(n: usize, field: &PrimeField) -> Result<System, SystemsError> {
    check_vars("eco", n, 3)?;
    let var = |i: usize| Monomial::var(i, n); // 0-based slot for x_{i+1}
    let last = n - 1;
    let mut polys = Vec::with_capacity(n);
    for k in 1..n {
        let mut terms: Vec<(Monomial, Coeff)> = vec![(var(k - 1).mul(&var(last)), Coeff::ONE)];
        for i in 1..n - k {
            terms.push((var(i - 1).mul(&var(i + k - 1)).mul(&var(last)), Coeff::ONE));
        }
        let c = field.element(k as u64);
        if c.is_zero() {
            return Err(SystemsError::DegenerateCoefficient(field.modulus()));
        }
        terms.push((Monomial::one(n), field.neg(c)));
        polys.push(Polynomial::from_terms(n, field, terms));
    }
    let mut lin: Vec<(Monomial, Coeff)> = (0..n - 1).map(|i| (var(i), Coeff::ONE)).collect();
    lin.push((Monomial::one(n), Coeff::ONE));
    polys.push(Polynomial::from_terms(n, field, lin));
    Ok(System {
        name: format!("eco-{n}"),
        var_names: xvar_names(n),
        field: *field,
        polys,
    })
}

/// Neural-network system: `10*x_i*(sum_{j != i} x_j^2) - 11*x_i + 10` for
/// each variable.
pub fn gen_noon(n: usize, field: &PrimeField) -> Result<System, SystemsError> {
    check_vars("noon", n, 2)?;
    let ten = field.element(10);
    let eleven = field.element(11);
    if ten.is_zero() || eleven.is_zero() {
        return Err(SystemsError::DegenerateCoefficient(field.modulus()));
    }
    let var = |i: usize| Monomial::var(i, n);
    let mut polys = Vec::with_capacity(n);
    for i in 0..n {
        let mut terms: Vec<(Monomial, Coeff)> = Vec::new();
        for j in 0..n {
            if j != i {
                let mut exps = vec![0u16; n];
                exps[i] = 1;
                exps[j] = 2;
                terms.push((Monomial::new(&exps), ten));
            }
        }
        terms.push((var(i), field.neg(eleven)));
        terms.push((Monomial::one(n), ten));
        polys.push(Polynomial::from_terms(n, field, terms));
    }
    Ok(System {
        name: format!("noon-{n}"),
        var_names: xvar_names(n),
        field: *field,
        polys,
    })
}

fn monomials_up_to_degree(nvars: usize, deg: u16) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(exps: &mut Vec<u16>, slot: usize, left: u16, out: &mut Vec<Monomial>) {
        if slot == exps.len() {
            out.push(Monomial::new(exps));
            return;
        }
        for e in 0..=left {
            exps[slot] = e;
            rec(exps, slot + 1, left - e, out);
        }
        exps[slot] = 0;
    }
    rec(&mut exps, 0, deg, &mut out);
    out
}

/// Seed-reproducible dense random system: `count_factor * nvars`
/// polynomials of total degree <= `deg`, every monomial carrying a
/// uniformly random nonzero coefficient.
pub fn gen_random(
    nvars: usize,
    deg: u16,
    count_factor: usize,
    seed: u64,
    field: &PrimeField,
) -> Result<System, SystemsError> {
    check_vars("random", nvars, 1)?;
    if deg < 1 {
        return Err(SystemsError::BadParameter {
            family: "random",
            n: deg as usize,
            min: 1,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials_up_to_degree(nvars, deg);
    let count = nvars * count_factor.max(1);
    let p = field.modulus();
    let polys = (0..count)
        .map(|_| {
            Polynomial::from_terms(
                nvars,
                field,
                monos
                    .iter()
                    .map(|&m| (m, field.element(1 + rng.next_u64() % (p - 1)))),
            )
        })
        .collect();
    Ok(System {
        name: format!("random-{nvars}-{deg}-{seed}"),
        var_names: xvar_names(nvars),
        field: *field,
        polys,
    })
}

/// Builds a system from a compact name: `cyclic-7`, `katsura-5`, `eco-4`,
/// `noon-3`, `random-5-2` or `random-5-2-41` (nvars-degree-seed).
pub fn system_from_name(name: &str, field: &PrimeField) -> Result<System, SystemsError> {
    let unknown = || SystemsError::UnknownName(name.to_string());
    let mut parts = name.split('-');
    let family = parts.next().ok_or_else(unknown)?;
    let nums: Vec<usize> = parts
        .map(|s| s.parse::<usize>().map_err(|_| unknown()))
        .collect::<Result<_, _>>()?;
    match (family, nums.as_slice()) {
        ("cyclic", [n]) => gen_cyclic(*n, field),
        ("katsura", [n]) => gen_katsura(*n, field),
        ("eco", [n]) => gen_eco(*n, field),
        ("noon", [n]) => gen_noon(*n, field),
        ("random", [n, d]) => gen_random(*n, *d as u16, 1, 0, field),
        ("random", [n, d, seed]) => gen_random(*n, *d as u16, 1, *seed as u64, field),
        _ => Err(unknown()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingVars,
    MissingChar,
    DuplicateHeader(&'static str),
    DuplicateVariable(String),
    UnknownVariable(String),
    BadNumber(String),
    BadField(FieldError),
    UnexpectedChar(char),
    EmptyTerm,
    NoPolynomials,
    TooManyVariables(usize),
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::MissingVars => write!(f, "missing `vars:` header"),
            ParseErrorKind::MissingChar => write!(f, "missing `char:` header"),
            ParseErrorKind::DuplicateHeader(h) => write!(f, "duplicate `{h}:` header"),
            ParseErrorKind::DuplicateVariable(v) => write!(f, "variable `{v}` listed twice"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::BadNumber(s) => write!(f, "bad number `{s}`"),
            ParseErrorKind::BadField(e) => write!(f, "{e}"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::EmptyTerm => write!(f, "empty term"),
            ParseErrorKind::NoPolynomials => write!(f, "no polynomials in system"),
            ParseErrorKind::TooManyVariables(n) => {
                write!(f, "at most {MAX_VARS} variables are supported, got {n}")
            }
        }
    }
}

/// Syntax or semantic error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

fn perr(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

/// Parses the `.gbsys` format.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let mut var_names: Option<Vec<String>> = None;
    let mut field: Option<PrimeField> = None;
    let mut polys: Vec<Polynomial> = Vec::new();
    let mut last_line = 0;

    for (li, raw) in text.lines().enumerate() {
        let lineno = li + 1;
        last_line = lineno;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("vars:") {
            if var_names.is_some() {
                return Err(perr(lineno, 1, ParseErrorKind::DuplicateHeader("vars")));
            }
            let mut names = Vec::new();
            for name in rest.split(',') {
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(perr(
                        lineno,
                        1,
                        ParseErrorKind::UnknownVariable(name.to_string()),
                    ));
                }
                if name.chars().next().unwrap().is_ascii_digit() {
                    return Err(perr(
                        lineno,
                        1,
                        ParseErrorKind::UnknownVariable(name.to_string()),
                    ));
                }
                if names.contains(&name.to_string()) {
                    return Err(perr(
                        lineno,
                        1,
                        ParseErrorKind::DuplicateVariable(name.to_string()),
                    ));
                }
                names.push(name.to_string());
            }
            if names.len() > MAX_VARS {
                return Err(perr(lineno, 1, ParseErrorKind::TooManyVariables(names.len())));
            }
            var_names = Some(names);
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("char:") {
            if field.is_some() {
                return Err(perr(lineno, 1, ParseErrorKind::DuplicateHeader("char")));
            }
            let text = rest.trim();
            let p: u64 = text
                .parse()
                .map_err(|_| perr(lineno, 1, ParseErrorKind::BadNumber(text.to_string())))?;
            field = Some(
                PrimeField::new(p).map_err(|e| perr(lineno, 1, ParseErrorKind::BadField(e)))?,
            );
            continue;
        }
        let names = var_names
            .as_ref()
            .ok_or_else(|| perr(lineno, 1, ParseErrorKind::MissingVars))?;
        let f = field.ok_or_else(|| perr(lineno, 1, ParseErrorKind::MissingChar))?;
        polys.push(parse_poly(line, lineno, names, &f)?);
    }

    let var_names = var_names.ok_or_else(|| perr(last_line.max(1), 1, ParseErrorKind::MissingVars))?;
    let field = field.ok_or_else(|| perr(last_line.max(1), 1, ParseErrorKind::MissingChar))?;
    if polys.is_empty() {
        return Err(perr(last_line.max(1), 1, ParseErrorKind::NoPolynomials));
    }
    Ok(System {
        name: String::from("input"),
        var_names,
        field,
        polys,
    })
}

fn parse_poly(
    line: &str,
    lineno: usize,
    names: &[String],
    field: &PrimeField,
) -> Result<Polynomial, ParseError> {
    let nvars = names.len();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    let mut terms: Vec<(Monomial, Coeff)> = Vec::new();

    let col = |i: usize| i + 1;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };

    skip_ws(&mut i);
    let mut first = true;
    while i < chars.len() {
        // sign
        let mut negative = false;
        if chars[i] == '+' || chars[i] == '-' {
            negative = chars[i] == '-';
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(perr(lineno, col(i), ParseErrorKind::UnexpectedChar(chars[i])));
        }
        first = false;

        // factors: integer literals and variable powers, `*`-separated
        let mut coeff = Coeff::ONE;
        let mut exps = vec![0u16; nvars];
        let mut any_factor = false;
        loop {
            skip_ws(&mut i);
            if i >= chars.len() {
                break;
            }
            let c = chars[i];
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n: u64 = text
                    .parse()
                    .map_err(|_| perr(lineno, col(start), ParseErrorKind::BadNumber(text.clone())))?;
                coeff = field.mul(coeff, field.element(n));
                any_factor = true;
            } else if c.is_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let slot = names
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| perr(lineno, col(start), ParseErrorKind::UnknownVariable(name)))?;
                let mut exp = 1u16;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let estart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let etext: String = chars[estart..i].iter().collect();
                    exp = etext.parse().map_err(|_| {
                        perr(lineno, col(estart), ParseErrorKind::BadNumber(etext.clone()))
                    })?;
                }
                exps[slot] += exp;
                any_factor = true;
            } else {
                break;
            }
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                continue;
            }
            // implicit product continues only before another factor
            if i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                continue;
            }
            break;
        }
        if !any_factor {
            let k = if i < chars.len() {
                ParseErrorKind::UnexpectedChar(chars[i])
            } else {
                ParseErrorKind::EmptyTerm
            };
            return Err(perr(lineno, col(i), k));
        }
        if negative {
            coeff = field.neg(coeff);
        }
        terms.push((Monomial::new(&exps), coeff));
        skip_ws(&mut i);
    }
    if terms.is_empty() {
        return Err(perr(lineno, 1, ParseErrorKind::EmptyTerm));
    }
    Ok(Polynomial::from_terms(nvars, field, terms))
}

/// Renders one polynomial with the given variable names. Coefficients above
/// p/2 print as subtracted values, so small integer systems round-trip
/// readably.
pub fn render_poly(p: &Polynomial, var_names: &[String], field: &PrimeField) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let half = field.modulus() / 2;
    let mut out = String::new();
    for (k, t) in p.terms().iter().enumerate() {
        let v = t.coeff.value();
        let (neg, mag) = if v > half {
            (true, field.modulus() - v)
        } else {
            (false, v)
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if mag != 1 || t.mono.is_one() {
            factors.push(mag.to_string());
        }
        for (slot, &e) in t.mono.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(var_names[slot].clone()),
                _ => factors.push(format!("{}^{}", var_names[slot], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Renders a whole system in the `.gbsys` format; `parse_system` of the
/// output yields an equal system.
pub fn render_system(sys: &System) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vars: {}", sys.var_names.join(","));
    let _ = writeln!(out, "char: {}", sys.field.modulus());
    for p in &sys.polys {
        let _ = writeln!(out, "{}", render_poly(p, &sys.var_names, &sys.field));
    }
    out
}
