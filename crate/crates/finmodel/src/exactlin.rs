//! Exact scalar arithmetic over the rationals and prime fields, and the
//! dense linear algebra everything else is built on.
//!
//! All arithmetic is exact: rationals are arbitrary-precision fractions in
//! lowest terms with positive denominator, residues are reduced
//! representatives in `[0, p)` for a prime `p`. There is no floating point
//! anywhere in this crate.
//!
//! Pivoting is deterministic (first nonzero entry in column order), so every
//! reduced echelon form, kernel basis and solution produced here is
//! reproducible. Downstream constructions (cohomology splittings, homotopy
//! transfer) depend on that.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation: `Q` or `F_p` for a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// A prime field, verifying primality.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, modulus: p },
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(p) => Scalar::Mod { value: 1 % p, modulus: p },
        }
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Mod { value: r, modulus: p }
            }
        }
    }

    /// Parses an exact coefficient string: an integer like `-3` or a
    /// fraction like `3/4`. Over `F_p` a fraction means division in the
    /// field; division by a multiple of `p` is rejected.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        match *self {
            Field::Rational => {
                let numer = BigInt::from_str(num_str)
                    .map_err(|_| Error::validation(format!("bad rational literal `{s}`")))?;
                let denom = match den_str {
                    Some(d) => BigInt::from_str(d)
                        .map_err(|_| Error::validation(format!("bad rational literal `{s}`")))?,
                    None => BigInt::one(),
                };
                if denom.is_zero() {
                    return Err(Error::validation(format!("zero denominator in `{s}`")));
                }
                Ok(Scalar::Rat(BigRational::new(numer, denom)))
            }
            Field::Prime(_) => {
                let numer: i64 = num_str
                    .parse()
                    .map_err(|_| Error::validation(format!("bad residue literal `{s}`")))?;
                let n = self.from_integer(numer);
                match den_str {
                    None => Ok(n),
                    Some(d) => {
                        let denom: i64 = d
                            .parse()
                            .map_err(|_| Error::validation(format!("bad residue literal `{s}`")))?;
                        let d = self.from_integer(denom);
                        n.div(&d)
                    }
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator (`BigRational` maintains this); residues are kept
/// reduced in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, modulus } => *value == 1 % *modulus,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed prime fields in scalar arithmetic");
                Scalar::Mod { value: (a + b) % p, modulus: *p }
            }
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed prime fields in scalar arithmetic");
                // p < 2^32 is enforced nowhere, but desk-scale primes keep
                // a*b inside u128 comfortably.
                let prod = (*a as u128 * *b as u128 % *p as u128) as u64;
                Scalar::Mod { value: prod, modulus: *p }
            }
            _ => panic!("mixed fields in scalar arithmetic"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Math("division by zero".into()));
        }
        match self {
            Scalar::Rat(a) => Ok(Scalar::Rat(a.recip())),
            Scalar::Mod { value, modulus } => {
                Ok(Scalar::Mod { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiplies by an integer sign (+1 or -1); a no-op for +1.
    pub fn with_sign(&self, sign: i64) -> Scalar {
        debug_assert!(sign == 1 || sign == -1);
        if sign == 1 {
            self.clone()
        } else {
            self.neg()
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Serialized matrices carry their field tag and entries as exact strings,
/// so certificates and reports survive a JSON round trip bit-for-bit.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    field: String,
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

/// A dense matrix over a single field, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix, checking that every entry lies in the same field.
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::MixedField(format!(
                    "entry over {} in a matrix over {}",
                    e.field(),
                    field
                )));
            }
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from rows of integer literals; test convenience.
    pub fn from_int_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in *row {
                entries.push(field.from_integer(x));
            }
        }
        Matrix { field, rows: r, cols: c, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        assert_eq!(v.field(), self.field, "entry field mismatch");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.rows);
        for (r, x) in v.iter().enumerate() {
            self.set(r, c, x.clone());
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        assert_eq!(self.field, other.field, "matmul field mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c).add(&a.mul(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matvec shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] = out[r].add(&a.mul(&v[c]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a.mul(s)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(Scalar::neg).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.at(r, c).clone());
            }
        }
        out
    }

    /// Keeps the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.at(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns in
    /// increasing order. The pivot in each column is the first usable
    /// nonzero entry scanning rows top to bottom, so the result is
    /// deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..m.cols {
            // first nonzero entry at or below the current rank row
            let pivot_row = (rank..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(pr) = pivot_row else { continue };
            if pr != rank {
                for c in 0..m.cols {
                    let tmp = m.at(rank, c).clone();
                    m.set(rank, c, m.at(pr, c).clone());
                    m.set(pr, c, tmp);
                }
            }
            let inv = m.at(rank, col).inv().expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = m.at(rank, c).mul(&inv);
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r == rank || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in 0..m.cols {
                    let v = m.at(r, c).sub(&factor.mul(m.at(rank, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns of `self` that form a basis of the column space
    /// (the columns at the rref pivot positions).
    pub fn column_space_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// A matrix whose columns form a basis of the null space. The basis is
    /// the standard one read off the rref free columns: column count equals
    /// `cols - rank`, and evaluating `self * v` on each column gives zero.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, self.field.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, j, r.at(i, fc).neg());
            }
        }
        out
    }

    /// Solves `self * x = rhs`. Returns `Ok(None)` when the system is
    /// inconsistent. The particular solution sets all free variables to
    /// zero.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if rhs.len() != self.rows {
            return Err(Error::dimension(format!(
                "solve: rhs has {} entries, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let rhs_m = Matrix::new(self.field, self.rows, 1, rhs.to_vec())?;
        Ok(self.solve_matrix(&rhs_m)?.map(|m| m.entries))
    }

    /// Batched solve: finds `X` with `self * X = rhs`, or `None` if any
    /// column is inconsistent.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows() != self.rows {
            return Err(Error::dimension(format!(
                "solve: rhs has {} rows, matrix has {}",
                rhs.rows(),
                self.rows
            )));
        }
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols());
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols() {
                x.set(pc, j, r.at(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Coordinates of each column of `targets` in the span of the columns
    /// of `self`, or `None` if some target is outside the span.
    pub fn express_in_columns(&self, targets: &Matrix) -> Result<Option<Matrix>> {
        self.solve_matrix(targets)
    }

    pub fn to_repr(&self) -> impl Serialize {
        MatrixRepr {
            field: match self.field {
                Field::Rational => "Q".to_string(),
                Field::Prime(p) => p.to_string(),
            },
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            field: match self.field {
                Field::Rational => "Q".to_string(),
                Field::Prime(p) => p.to_string(),
            },
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        use serde::de::Error as DeError;
        let repr = MatrixRepr::deserialize(d)?;
        let field = if repr.field == "Q" {
            Field::Rational
        } else {
            let p: u64 = repr.field.parse().map_err(DeError::custom)?;
            Field::prime(p).map_err(DeError::custom)?
        };
        let entries = repr
            .entries
            .iter()
            .map(|e| field.parse_scalar(e))
            .collect::<Result<Vec<_>>>()
            .map_err(DeError::custom)?;
        Matrix::new(field, repr.rows, repr.cols, entries).map_err(DeError::custom)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F2: Field = Field::Prime(2);
    const F5: Field = Field::Prime(5);
    const Q: Field = Field::Rational;

    #[test]
    fn scalar_exactness() {
        let x = Q.parse_scalar("1/3").unwrap();
        let y = Q.parse_scalar("-7/6").unwrap();
        assert_eq!(x.add(&y).sub(&y), x);
        assert_eq!(x.add(&y), Q.parse_scalar("-5/6").unwrap());
        let a = F5.from_integer(3);
        let b = F5.from_integer(4);
        assert_eq!(a.mul(&b), F5.from_integer(2));
        assert_eq!(a.inv().unwrap(), F5.from_integer(2));
    }

    #[test]
    fn non_prime_field_rejected() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(7).is_ok());
    }

    #[test]
    fn mixed_field_matrix_rejected() {
        let entries = vec![Q.one(), F5.one()];
        assert!(matches!(Matrix::new(Q, 1, 2, entries), Err(Error::MixedField(_))));
    }

    #[test]
    fn rref_identity() {
        let m = Matrix::identity(Q, 3);
        let (r, pivots) = m.rref();
        assert_eq!(r, m);
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        // [[2,4],[1,2]] over Q row reduces to [[1,2],[0,0]]
        let m = Matrix::from_int_rows(Q, &[&[2, 4], &[1, 2]]);
        let (r, pivots) = m.rref();
        assert_eq!(r, Matrix::from_int_rows(Q, &[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rref_f2_already_reduced() {
        let m = Matrix::from_int_rows(F2, &[&[1, 1]]);
        let (r, pivots) = m.rref();
        assert_eq!(r, m);
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = Matrix::identity(Q, 3);
        assert_eq!(m.kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_f2_line() {
        let m = Matrix::from_int_rows(F2, &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![F2.one(), F2.one()]);
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let m = Matrix::zeros(Q, 2, 2);
        assert_eq!(m.kernel_basis(), Matrix::identity(Q, 2));
    }

    #[test]
    fn solve_identity() {
        let m = Matrix::identity(Q, 2);
        let v = vec![Q.from_integer(3), Q.from_integer(-1)];
        assert_eq!(m.solve(&v).unwrap(), Some(v));
    }

    #[test]
    fn solve_inconsistent() {
        let m = Matrix::from_int_rows(Q, &[&[1], &[0]]);
        let v = vec![Q.from_integer(0), Q.from_integer(1)];
        assert_eq!(m.solve(&v).unwrap(), None);
    }

    #[test]
    fn solve_underdetermined_verified_by_substitution() {
        let m = Matrix::from_int_rows(Q, &[&[1, 2], &[0, 0]]);
        let v = vec![Q.from_integer(3), Q.from_integer(0)];
        let x = m.solve(&v).unwrap().expect("consistent");
        assert_eq!(m.mul_vec(&x), v);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Matrix::identity(Q, 2);
        assert!(m.solve(&[Q.one()]).is_err());
    }

    #[test]
    fn matrix_serde_round_trip() {
        let m = Matrix::new(
            Q,
            2,
            2,
            vec![
                Q.parse_scalar("1/2").unwrap(),
                Q.from_integer(-3),
                Q.zero(),
                Q.parse_scalar("7/5").unwrap(),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: Matrix = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }

    fn arb_field() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Q), Just(F2), Just(F5), Just(Field::Prime(7))]
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (arb_field(), 1usize..5, 1usize..5).prop_flat_map(|(field, r, c)| {
            proptest::collection::vec(-4i64..5, r * c).prop_map(move |ints| {
                let entries = ints.iter().map(|&x| field.from_integer(x)).collect();
                Matrix { field, rows: r, cols: c, entries }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let (r, pivots) = m.rref();
            let k = m.kernel_basis();
            prop_assert_eq!(pivots.len() + k.cols(), m.cols());
            prop_assert_eq!(r.rank(), pivots.len());
        }

        #[test]
        fn kernel_columns_annihilated(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert!(m.mul(&k).is_zero());
            // columns are independent: rank equals count
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_substitution(m in arb_matrix(), xs in proptest::collection::vec(-3i64..4, 1..5)) {
            // build a consistent rhs from a known solution, then check the
            // returned solution reproduces it exactly
            let x: Vec<Scalar> = (0..m.cols())
                .map(|i| m.field().from_integer(*xs.get(i).unwrap_or(&1)))
                .collect();
            let rhs = m.mul_vec(&x);
            let sol = m.solve(&rhs).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&sol), rhs);
        }
    }
}
