//! Lens-space arithmetic: oriented normal forms, the classification
//! predicate, chain boundaries via continued fractions, and the dual-pair
//! relation behind the blow-down chains.

use crate::error::{Error, Result};
use crate::matrix::Int;
use crate::plumbing::cfrac_eval;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// An oriented lens space `±L(p, q)` with `0 < q < p` and `gcd(p, q) = 1`.
///
/// Orientation is an explicit sign: `-L(p, q)` and `L(p, p - q)` are the
/// same oriented manifold, and `lens_equiv` treats them as such.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensSpace {
    p: Int,
    q: Int,
    sign: i8,
}

impl LensSpace {
    /// `L(p, q)` with `q` reduced mod `p`.
    pub fn new(p: Int, q: Int) -> Result<Self> {
        Self::with_sign(p, q, 1)
    }

    /// `±L(p, q)`: any non-negative `sign` means `+`.
    pub fn with_sign(p: Int, q: Int, sign: i8) -> Result<Self> {
        let bad = || Error::BadLensParameters {
            p: p.to_string(),
            q: q.to_string(),
        };
        if p < Int::from(2) {
            return Err(bad());
        }
        let q_norm = q.mod_floor(&p);
        if q_norm.is_zero() || !p.gcd(&q_norm).is_one() {
            return Err(bad());
        }
        Ok(LensSpace {
            p,
            q: q_norm,
            sign: if sign >= 0 { 1 } else { -1 },
        })
    }

    pub fn p(&self) -> &Int {
        &self.p
    }

    pub fn q(&self) -> &Int {
        &self.q
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The same space with the opposite orientation.
    pub fn reversed(&self) -> LensSpace {
        LensSpace {
            p: self.p.clone(),
            q: self.q.clone(),
            sign: -self.sign,
        }
    }

    /// `(p, q)` of the positively-oriented normal form, using
    /// `-L(p, q) = L(p, p - q)`.
    pub fn normalized(&self) -> (Int, Int) {
        if self.sign > 0 {
            (self.p.clone(), self.q.clone())
        } else {
            (self.p.clone(), &self.p - &self.q)
        }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.sign < 0 { "-" } else { "" };
        write!(f, "{}L({},{})", prefix, self.p, self.q)
    }
}

/// Oriented homeomorphism test: after orientation normalization the spaces
/// agree iff `p` matches and `q' = q` or `q q' = 1 (mod p)`.
pub fn lens_equiv(a: &LensSpace, b: &LensSpace) -> bool {
    let (pa, qa) = a.normalized();
    let (pb, qb) = b.normalized();
    pa == pb && (qa == qb || (qa * qb).mod_floor(&pa).is_one())
}

/// Homeomorphism test ignoring orientation.
pub fn lens_equiv_unoriented(a: &LensSpace, b: &LensSpace) -> bool {
    lens_equiv(a, b) || lens_equiv(a, &b.reversed())
}

/// Oriented boundary of the linear plumbing on `weights` (all `<= -2`):
/// `-L(p, q)` where `p/q` is the left-to-right continued-fraction value of
/// the negated weights.
pub fn chain_boundary(weights: &[Int]) -> Result<LensSpace> {
    let mut entries = Vec::with_capacity(weights.len());
    for (index, w) in weights.iter().enumerate() {
        if *w > Int::from(-2) {
            return Err(Error::BadWeights {
                index,
                value: w.to_string(),
            });
        }
        entries.push(-w);
    }
    let (p, q) = cfrac_eval(&entries)?;
    LensSpace::with_sign(p, q, -1)
}

/// Dual-pair relation for the blow-down chains: `q + q' = p` and
/// `(p q - 1)(p q' - 1) = 1 (mod p^2)`.
pub fn park_dual(p: &Int, q: &Int, q2: &Int) -> bool {
    if q + q2 != *p {
        return false;
    }
    let psq = p * p;
    ((p * q - Int::from(1)) * (p * q2 - Int::from(1)))
        .mod_floor(&psq)
        .is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_int;
    use crate::plumbing::park_chain;
    use num_traits::Signed;

    fn l(p: i64, q: i64) -> LensSpace {
        LensSpace::new(Int::from(p), Int::from(q)).unwrap()
    }

    fn nl(p: i64, q: i64) -> LensSpace {
        LensSpace::with_sign(Int::from(p), Int::from(q), -1).unwrap()
    }

    #[test]
    fn construction_and_normalization() {
        assert_eq!(l(25, 31), l(25, 6));
        assert_eq!(l(25, -4), l(25, 21));
        assert_eq!(nl(25, 4).normalized(), (Int::from(25), Int::from(21)));
        assert_eq!(nl(2, 1).normalized(), (Int::from(2), Int::from(1)));
        assert_eq!(l(25, 6).to_string(), "L(25,6)");
        assert_eq!(nl(25, 4).to_string(), "-L(25,4)");
        assert_eq!(nl(25, 4).reversed(), l(25, 4));

        for (p, q) in [(25, 5), (25, 0), (1, 1), (0, 1), (-3, 1)] {
            assert!(matches!(
                LensSpace::new(Int::from(p), Int::from(q)),
                Err(Error::BadLensParameters { .. })
            ));
        }
    }

    #[test]
    fn equivalence_fixtures() {
        // The printed chain -L(25,4) = L(25,21) = -L(25,19) = L(25,6).
        let chain = [nl(25, 4), l(25, 21), nl(25, 19), l(25, 6)];
        for a in &chain {
            for b in &chain {
                assert!(lens_equiv(a, b), "{} vs {}", a, b);
            }
        }
        assert!(lens_equiv(&l(9, 2), &l(9, 5)));
        assert!(lens_equiv(&l(9, 7), &l(9, 4)));
        // Dual pair, not homeomorphic: L(25,7) vs L(25,14).
        assert!(!lens_equiv(&l(25, 7), &l(25, 14)));
        assert!(!lens_equiv_unoriented(&l(25, 7), &l(25, 14)));
        assert!(lens_equiv_unoriented(&nl(25, 4), &l(25, 4).reversed()));

        assert!(park_dual(&Int::from(5), &Int::from(2), &Int::from(3)));
        assert!(park_dual(&Int::from(5), &Int::from(1), &Int::from(4)));
        assert!(!park_dual(&Int::from(5), &Int::from(2), &Int::from(2)));
        // The mod-p^2 congruence follows from q + q' = p, so this holds too.
        assert!(park_dual(&Int::from(7), &Int::from(2), &Int::from(5)));
        assert!(!park_dual(&Int::from(7), &Int::from(2), &Int::from(4)));
    }

    #[test]
    fn equivalence_relation_properties() {
        // All (p, q) with p <= 13: reflexive, symmetric, transitive.
        let mut spaces = Vec::new();
        for p in 2i64..=13 {
            for q in 1..p {
                if Int::from(p).gcd(&Int::from(q)).is_one() {
                    spaces.push(l(p, q));
                    spaces.push(nl(p, q));
                }
            }
        }
        for a in &spaces {
            assert!(lens_equiv(a, a));
        }
        for a in &spaces {
            for b in &spaces {
                assert_eq!(lens_equiv(a, b), lens_equiv(b, a));
                for c in &spaces {
                    if lens_equiv(a, b) && lens_equiv(b, c) {
                        assert!(lens_equiv(a, c), "{} {} {}", a, b, c);
                    }
                }
            }
        }
    }

    #[test]
    fn chain_boundaries() {
        let cases: [(&[i64], i64, i64); 5] = [
            (&[-5, -2, -2, -2, -2, -2], 25, 6),
            (&[-4, -3, -2, -2], 25, 7),
            (&[-2], 2, 1),
            (&[-2, -5, -3], 25, 14),
            (&[-7, -2, -2, -2], 25, 4),
        ];
        for (weights, p, q) in cases {
            let b = chain_boundary(&vec_int(weights)).unwrap();
            assert_eq!(b, nl(p, q), "weights {:?}", weights);
        }
        assert!(matches!(
            chain_boundary(&vec_int(&[-3, -1, -2])),
            Err(Error::BadWeights { index: 1, .. })
        ));
    }

    #[test]
    fn park_chain_boundaries() {
        // chain_boundary(park_chain(p, q)) is L(p^2, pq - 1) up to
        // orientation, and |det| of the chain form is p^2.
        for (p, q) in [(2i64, 1i64), (3, 1), (3, 2), (5, 2), (5, 3), (7, 4)] {
            let g = park_chain(&Int::from(p), &Int::from(q)).unwrap();
            let boundary = chain_boundary(g.weights()).unwrap();
            let target = l(p * p, p * q - 1);
            assert!(
                lens_equiv_unoriented(&boundary, &target),
                "({}, {}): {} vs {}",
                p,
                q,
                boundary,
                target
            );
            assert_eq!(
                g.intersection_form().det().unwrap().abs(),
                Int::from(p * p)
            );
        }
    }
}
