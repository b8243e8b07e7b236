//! Finitely generated subgroups of `Z^d ⊕ Q^e` with decidable membership.
//!
//! Rational coordinates are scaled by the lcm of the generator denominators in
//! that column, which turns the subgroup into an integer lattice. The lattice is
//! kept in Hermite normal form together with the unimodular transform, so a
//! membership test also yields integer coefficients over the original
//! generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::value::{fmt_rational, Rational, Value, ValueGroup};

#[derive(Debug, Clone)]
pub struct SubgroupDescriptor {
    group: ValueGroup,
    generators: Vec<Value>,
    scale: Vec<BigInt>,
    /// Echelon rows of the scaled lattice, positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`.
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// `basis[i] = Σ_j transform[i][j] * generators[j]` (scaled).
    transform: Vec<Vec<BigInt>>,
    /// Integer relations among the generators.
    kernel: Vec<Vec<BigInt>>,
}

/// Serializable summary of the normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub group: String,
    pub generators: Vec<String>,
    pub basis: Vec<String>,
    pub rational_fibre: Option<String>,
}

impl SubgroupDescriptor {
    pub fn new(group: ValueGroup, generators: Vec<Value>) -> Result<Self> {
        for g in &generators {
            group.check(g)?;
        }
        let dim = group.rank();
        let scale: Vec<BigInt> = (0..dim)
            .map(|c| {
                generators
                    .iter()
                    .fold(BigInt::one(), |acc, g| acc.lcm(g.0[c].denom()))
            })
            .collect();
        let rows: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| scale_value(g, &scale).expect("generator scales to integers"))
            .collect();
        let (basis, pivots, transform, kernel) = hermite(rows);
        Ok(SubgroupDescriptor {
            group,
            generators,
            scale,
            basis,
            pivots,
            transform,
            kernel,
        })
    }

    pub fn group(&self) -> &ValueGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Value] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis rows of the normal form, as ambient values.
    pub fn basis(&self) -> Vec<Value> {
        self.basis.iter().map(|r| unscale(r, &self.scale)).collect()
    }

    /// Generator of the subgroup's intersection with the last rational
    /// coordinate axis, when that intersection is nontrivial.
    pub fn rational_fibre(&self) -> Option<Rational> {
        let last = self.group.rank().checked_sub(1)?;
        self.basis
            .iter()
            .zip(&self.pivots)
            .find(|(_, &p)| p == last)
            .map(|(r, _)| Rational::new(r[last].clone(), self.scale[last].clone()))
    }

    /// Integer coefficients `c` with `Σ c_j generators[j] = g`, or `None`.
    pub fn membership(&self, g: &Value) -> Option<Vec<BigInt>> {
        if !self.group.contains(g) {
            return None;
        }
        let mut t = scale_value(g, &self.scale)?;
        let mut x = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, r) = t[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (tc, rc) in t.iter_mut().zip(row) {
                *tc -= &q * rc;
            }
            x.push(q);
        }
        if t.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigInt::zero(); self.generators.len()];
        for (xi, urow) in x.iter().zip(&self.transform) {
            for (c, u) in coeffs.iter_mut().zip(urow) {
                *c += xi * u;
            }
        }
        Some(coeffs)
    }

    /// Like [`membership`](Self::membership), with the coefficient vector
    /// shortened in the `l1` norm by adding generator relations while that helps.
    pub fn short_membership(&self, g: &Value) -> Option<Vec<BigInt>> {
        let mut c = self.membership(g)?;
        let norm = |v: &[BigInt]| v.iter().map(|x| x.abs()).sum::<BigInt>();
        let mut best = norm(&c);
        loop {
            let mut improved = false;
            for k in &self.kernel {
                for sign in [1, -1] {
                    loop {
                        let t: Vec<BigInt> = c.iter().zip(k).map(|(x, y)| x + y * sign).collect();
                        let n = norm(&t);
                        if n >= best {
                            break;
                        }
                        c = t;
                        best = n;
                        improved = true;
                    }
                }
            }
            if !improved {
                return Some(c);
            }
        }
    }

    pub fn contains(&self, g: &Value) -> bool {
        self.membership(g).is_some()
    }

    /// Canonical representative of `g + H`: pivot coordinates reduced into
    /// `[0, pivot)`. Two values share a representative iff their difference
    /// lies in the subgroup.
    pub fn coset_representative(&self, g: &Value) -> Value {
        let mut t: Vec<Rational> = g
            .0
            .iter()
            .zip(&self.scale)
            .map(|(x, s)| x * Rational::from_integer(s.clone()))
            .collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = (&t[p] / Rational::from_integer(row[p].clone())).floor();
            if q.is_zero() {
                continue;
            }
            for (tc, rc) in t.iter_mut().zip(row) {
                *tc -= &q * Rational::from_integer(rc.clone());
            }
        }
        Value(
            t.into_iter()
                .zip(&self.scale)
                .map(|(x, s)| x / Rational::from_integer(s.clone()))
                .collect(),
        )
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm {
            group: self.group.to_string(),
            generators: self.generators.iter().map(Value::to_string).collect(),
            basis: self.basis().iter().map(Value::to_string).collect(),
            rational_fibre: self.rational_fibre().map(|r| fmt_rational(&r)),
        }
    }
}

fn scale_value(g: &Value, scale: &[BigInt]) -> Option<Vec<BigInt>> {
    g.0.iter()
        .zip(scale)
        .map(|(x, s)| {
            let y = x * Rational::from_integer(s.clone());
            y.is_integer().then(|| y.to_integer())
        })
        .collect()
}

fn unscale(row: &[BigInt], scale: &[BigInt]) -> Value {
    Value(
        row.iter()
            .zip(scale)
            .map(|(x, s)| Rational::new(x.clone(), s.clone()))
            .collect(),
    )
}

/// Row-style Hermite normal form with transform tracking. Returns the nonzero
/// echelon rows, their pivot columns, the matching transform rows, and the
/// transform rows that map to zero.
#[allow(clippy::type_complexity)]
fn hermite(
    mut m: Vec<Vec<BigInt>>,
) -> (Vec<Vec<BigInt>>, Vec<usize>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        loop {
            let best = (r..n)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(r, best);
            u.swap(r, best);
            let mut done = true;
            for i in r + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                sub_row(&mut m, i, r, &q);
                sub_row(&mut u, i, r, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            m[r].iter_mut().for_each(|x| *x = -&*x);
            u[r].iter_mut().for_each(|x| *x = -&*x);
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                sub_row(&mut m, i, r, &q);
                sub_row(&mut u, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    let kernel = u.split_off(r);
    (m, pivots, u, kernel)
}

fn sub_row(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}
