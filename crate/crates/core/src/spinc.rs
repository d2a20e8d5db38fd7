//! Characteristic covectors and their spin-c classes.
//!
//! For a nonsingular symmetric integer form `A`, a covector `K` is
//! characteristic when `K_i ≡ A_ii (mod 2)` for all i. Two characteristic
//! covectors lie in the same spin-c class when they differ by `2 A x` for an
//! integer vector `x`. Classes are tracked exactly through the Smith normal
//! form of `A`; the number of classes is `|det A|`.

use crate::error::{Error, Result};
use crate::matrix::{dot, Int, IntMatrix, Rat, SnfResult};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact spin-c bookkeeping context for one nonsingular symmetric form.
#[derive(Clone, Debug)]
pub struct CharLattice {
    form: IntMatrix,
    det: Int,
    adj: IntMatrix,
    snf: SnfResult,
    /// Inverse of the row transform (exact; U is unimodular).
    u_inv: IntMatrix,
    /// Diagonal of the Smith form (all positive for nonsingular input).
    factors: Vec<Int>,
}

impl CharLattice {
    pub fn new(form: IntMatrix) -> Result<Self> {
        form.require_symmetric()?;
        let det = form.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let adj = form.adjugate()?;
        let snf = form.smith_normal_form();
        let u_inv = snf
            .u
            .invert()
            .expect("U is unimodular")
            .to_int()
            .expect("U inverse is integral");
        let factors: Vec<Int> = (0..form.rows()).map(|i| snf.d.get(i, i).clone()).collect();
        Ok(CharLattice {
            form,
            det,
            adj,
            snf,
            u_inv,
            factors,
        })
    }

    pub fn from_graph(g: &crate::plumbing::PlumbingGraph) -> Result<Self> {
        Self::new(g.intersection_form())
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rows()
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    /// Number of spin-c classes: `|det|`.
    pub fn class_count(&self) -> Int {
        self.det.abs()
    }

    /// Invariant factors of the form (Smith diagonal).
    pub fn invariant_factors(&self) -> &[Int] {
        &self.factors
    }

    /// Moduli for group coordinates of class differences.
    pub fn moduli(&self) -> &[Int] {
        &self.factors
    }

    /// Row transform of the Smith decomposition (for in-crate fast scans).
    pub(crate) fn u_transform(&self) -> &IntMatrix {
        &self.snf.u
    }

    /// Adjugate of the form (for in-crate fast scans).
    pub(crate) fn adjugate_ref(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn is_characteristic(&self, k: &[Int]) -> bool {
        k.len() == self.rank()
            && (0..self.rank()).all(|i| (&k[i] - self.form.get(i, i)).is_even())
    }

    pub fn require_characteristic(&self, k: &[Int]) -> Result<()> {
        if k.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: k.len(),
            });
        }
        match (0..self.rank()).find(|&i| (&k[i] - self.form.get(i, i)).is_odd()) {
            Some(i) => Err(Error::NotCharacteristic { index: i }),
            None => Ok(()),
        }
    }

    /// Class label: `(U K) mod 2 d_i`, componentwise in `[0, 2 d_i)`.
    /// Equal residues == same spin-c class.
    pub fn residue(&self, k: &[Int]) -> Vec<Int> {
        let uk = self.snf.u.matvec(k);
        uk.into_iter()
            .zip(&self.factors)
            .map(|(x, d)| {
                let m = Int::from(2) * d;
                x.mod_floor(&m)
            })
            .collect()
    }

    /// Witness that two covectors are in the same class: returns `x` with
    /// `k2 = k + 2 A x`, or None when the classes differ.
    pub fn same_class(&self, k: &[Int], k2: &[Int]) -> Option<Vec<Int>> {
        if k.len() != self.rank() || k2.len() != self.rank() {
            return None;
        }
        let delta: Vec<Int> = k2.iter().zip(k).map(|(a, b)| a - b).collect();
        if delta.iter().any(|v| v.is_odd()) {
            return None;
        }
        let half: Vec<Int> = delta.iter().map(|v| v / Int::from(2)).collect();
        // Solve A x = half: y_i = (U half)_i / d_i, x = V y.
        let uh = self.snf.u.matvec(&half);
        let mut y = Vec::with_capacity(self.rank());
        for (num, d) in uh.iter().zip(&self.factors) {
            let (q, r) = num.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        }
        let x = self.snf.v.matvec(&y);
        debug_assert_eq!(
            {
                let ax = self.form.matvec(&x);
                let got: Vec<Int> = k.iter().zip(&ax).map(|(a, b)| a + Int::from(2) * b).collect();
                got
            },
            k2.to_vec()
        );
        Some(x)
    }

    pub fn conjugate(&self, k: &[Int]) -> Vec<Int> {
        k.iter().map(|v| -v).collect()
    }

    /// `K^2 = K^T A^{-1} K`, exactly.
    pub fn square(&self, k: &[Int]) -> Rat {
        Rat::new(self.square_scaled(k), self.det.clone())
    }

    /// `K^2 * det` (integer): `K^T adj(A) K`.
    pub fn square_scaled(&self, k: &[Int]) -> Int {
        let ak = self.adj.matvec(k);
        dot(k, &ak)
    }

    /// Group coordinates of the class difference `K - base` in
    /// `⊕ Z/d_i`: `(U (K - base) / 2) mod d_i`.
    pub fn group_element(&self, k: &[Int], base: &[Int]) -> Result<Vec<Int>> {
        self.require_characteristic(k)?;
        self.require_characteristic(base)?;
        let half: Vec<Int> = k
            .iter()
            .zip(base)
            .map(|(a, b)| (a - b) / Int::from(2))
            .collect();
        let uh = self.snf.u.matvec(&half);
        Ok(uh
            .into_iter()
            .zip(&self.factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect())
    }

    /// Covector whose class difference from `base` has group coordinates
    /// `g`: returns `base + 2 U^{-1} g`. Inverse of `group_element`; used to
    /// walk subgroups.
    pub fn apply_group_element(&self, base: &[Int], g: &[Int]) -> Vec<Int> {
        let y = self.u_inv.matvec(g);
        base.iter()
            .zip(&y)
            .map(|(b, yy)| b + Int::from(2) * yy)
            .collect()
    }

    /// The box of characteristic covectors with `lo_i <= K_i <= hi_i`.
    pub fn char_box(&self, preset: BoxPreset) -> CharBox {
        self.char_box_widened(preset, 0)
    }

    /// Widen each side of the box by `2 * rounds` (full box only; the
    /// initial and taut boxes are fixed by their definitions).
    pub fn char_box_widened(&self, preset: BoxPreset, rounds: u32) -> CharBox {
        let n = self.rank();
        let two = Int::from(2);
        let pad = Int::from(2i64 * i64::from(rounds));
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let m = self.form.get(i, i).clone();
            let (l, h) = match preset {
                BoxPreset::Full => (&m - &pad, -&m + &pad),
                BoxPreset::Initial => (&m + &two, -&m),
                BoxPreset::Taut => (&m + &two, -&m - &two),
            };
            lo.push(l);
            hi.push(h);
        }
        CharBox { lo, hi }
    }
}

/// Standard characteristic boxes over a negative-definite form with diagonal
/// `m_i` (negative):
/// full `[m, -m]`, initial `[m+2, -m]`, taut `[m+2, -m-2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxPreset {
    Full,
    Initial,
    Taut,
}

impl std::str::FromStr for BoxPreset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(BoxPreset::Full),
            "initial" => Ok(BoxPreset::Initial),
            "taut" => Ok(BoxPreset::Taut),
            other => Err(format!("unknown box preset '{}'", other)),
        }
    }
}

/// Inclusive per-coordinate bounds; coordinates step by 2 (parity is pinned
/// by the diagonal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharBox {
    pub lo: Vec<Int>,
    pub hi: Vec<Int>,
}

impl CharBox {
    /// Number of covectors in the box.
    pub fn count(&self) -> Int {
        let mut total = Int::from(1);
        for (l, h) in self.lo.iter().zip(&self.hi) {
            if h < l {
                return Int::zero();
            }
            total *= (h - l) / Int::from(2) + Int::from(1);
        }
        total
    }

    pub fn contains(&self, k: &[Int]) -> bool {
        k.len() == self.lo.len()
            && k.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| v >= l && v <= h)
    }

    /// Iterate the box in lexicographic order (last coordinate fastest).
    pub fn iter(&self) -> CharBoxIter<'_> {
        let empty = self.lo.iter().zip(&self.hi).any(|(l, h)| h < l);
        CharBoxIter {
            bx: self,
            cur: if empty { None } else { Some(self.lo.clone()) },
        }
    }
}

pub struct CharBoxIter<'a> {
    bx: &'a CharBox,
    cur: Option<Vec<Int>>,
}

impl<'a> Iterator for CharBoxIter<'a> {
    type Item = Vec<Int>;

    fn next(&mut self) -> Option<Vec<Int>> {
        let cur = self.cur.take()?;
        let mut next = cur.clone();
        let n = next.len();
        let mut i = n;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            next[i] += Int::from(2);
            if next[i] <= self.bx.hi[i] {
                self.cur = Some(next);
                break;
            }
            next[i] = self.bx.lo[i].clone();
        }
        Some(cur)
    }
}
