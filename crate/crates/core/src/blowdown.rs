//! Four-manifold bookkeeping for replacing an embedded plumbed configuration
//! by a rational homology ball: taut tests, the formal dimension formula,
//! grading shifts between covectors of one class, U-powers, and lifting of
//! ambient basic classes to the surgered manifold.
//!
//! Ambient data (Euler characteristic, signature, basic-class pairings with
//! the configuration spheres) is declarative input; this module only does
//! the exact lattice arithmetic on top of it.

use crate::ball::ExtensionReport;
use crate::dinv::full_path;
use crate::error::{Error, Result};
use crate::matrix::{dot, Int, IntMatrix, Rat};
use crate::plumbing::PlumbingGraph;
use crate::spinc::CharLattice;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Taut test: `|K_i| + A_ii <= -2` at every vertex. (`K` is expected to be
/// characteristic; the inequality itself is parity-blind.)
pub fn taut_check(form: &IntMatrix, k: &[Int]) -> bool {
    k.len() == form.rows()
        && (0..form.rows()).all(|i| k[i].abs() + form.get(i, i) <= Int::from(-2))
}

/// True when the greedy full path from `k` consists of exactly one covector
/// (the taut case).
pub fn taut_unique_path(g: &PlumbingGraph, k: &[Int]) -> Result<bool> {
    Ok(full_path(g, k)?.len() == 1)
}

/// Formal dimension `D = (c1^2 - (2 chi + 3 sigma)) / 4`, exactly.
pub fn d_formal(c1sq: &Rat, chi: &Int, sigma: &Int) -> Rat {
    let t = Int::from(2) * chi + Int::from(3) * sigma;
    (c1sq - Rat::from_integer(t)) / Rat::from_integer(Int::from(4))
}

/// Grading shift between two covectors of one spin-c class:
/// `<K, V> + V·V` where `K' = K + 2 A V`. Errors when the covectors lie in
/// different classes.
pub fn grrel_shift(ctx: &CharLattice, k: &[Int], k2: &[Int]) -> Result<Int> {
    let v = ctx.same_class(k, k2).ok_or(Error::NotSameClass)?;
    let av = ctx.form().matvec(&v);
    Ok(dot(k, &v) + dot(&v, &av))
}

/// U-power of the shift `K -> K + 2 A V`: `n = -(<K,V> + V·V) / 2`.
/// Requires `K` characteristic (which makes the shift even); errors when the
/// shift is positive.
pub fn u_power(form: &IntMatrix, k: &[Int], v: &[Int]) -> Result<Int> {
    let n = form.require_square()?;
    if k.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if k.len() != n { k.len() } else { v.len() },
        });
    }
    if let Some(i) = (0..n).find(|&i| (&k[i] - form.get(i, i)).is_odd()) {
        return Err(Error::NotCharacteristic { index: i });
    }
    let av = form.matvec(v);
    let shift = dot(k, v) + dot(v, &av);
    if shift.is_positive() {
        return Err(Error::NegativeShift {
            shift: shift.to_string(),
        });
    }
    let (q, r) = (-shift).div_rem(&Int::from(2));
    debug_assert!(r.is_zero(), "characteristic K makes the shift even");
    Ok(q)
}

/// One row of the blow-up ledger on a single (-1)-vertex: moving `K = (1)`
/// to `K' = (2n+1)` via `V = (-n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftLedger {
    pub n: u32,
    pub k: Vec<Int>,
    pub k_shifted: Vec<Int>,
    pub v: Vec<Int>,
    /// `<K,V> + V·V = -(n^2 + n)`.
    pub shift: Int,
    /// `n (n + 1) / 2`.
    pub u_power: Int,
}

/// Blow-up consistency ledger computed through the real shift machinery on
/// the form `[[-1]]`, for `n = 0 ..= max_n`.
pub fn blowup_ledger(max_n: u32) -> Result<Vec<ShiftLedger>> {
    let form = IntMatrix::from_rows(vec![vec![Int::from(-1)]]);
    let ctx = CharLattice::new(form.clone())?;
    let k = vec![Int::from(1)];
    let mut out = Vec::with_capacity(max_n as usize + 1);
    for n in 0..=max_n {
        let v = vec![Int::from(-(n as i64))];
        let k_shifted = vec![Int::from(2 * n as i64 + 1)];
        let shift = grrel_shift(&ctx, &k, &k_shifted)?;
        debug_assert_eq!(ctx.same_class(&k, &k_shifted).as_deref(), Some(&v[..]));
        let power = u_power(&form, &k, &v)?;
        out.push(ShiftLedger {
            n,
            k: k.clone(),
            k_shifted,
            v,
            shift,
            u_power: power,
        });
    }
    Ok(out)
}

/// One named ambient basic class: its self-square and its pairings with the
/// configuration spheres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientClass {
    pub name: String,
    pub c1sq: Int,
    pub pairings: Vec<Int>,
}

/// Declarative ambient data: Euler characteristic, signature, and the basic
/// classes with their configuration pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientData {
    pub chi: Int,
    pub sigma: Int,
    pub classes: Vec<AmbientClass>,
}

/// Characteristic gluing check: the restriction to the configuration must be
/// characteristic for the form, and the ambient side must satisfy the
/// characteristic square-signature congruence `c1^2 ≡ sigma (mod 8)`.
pub fn characteristic_glue_check(
    form: &IntMatrix,
    k: &[Int],
    c1sq: &Int,
    sigma: &Int,
) -> bool {
    let n = form.rows();
    if k.len() != n {
        return false;
    }
    let config_ok = (0..n).all(|i| (&k[i] - form.get(i, i)).is_even());
    let ambient_ok = (c1sq - sigma).mod_floor(&Int::from(8)).is_zero();
    config_ok && ambient_ok
}

/// Lift verdict for one ambient class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLift {
    pub name: String,
    /// Restriction to the configuration (the pairing vector).
    pub restriction: Vec<Int>,
    pub c1sq: Int,
    /// Characteristic on the configuration and square-signature congruence
    /// on the ambient side.
    pub glue_characteristic: bool,
    pub taut: bool,
    /// `K^2 = -b2` exactly.
    pub sharp: bool,
    /// The restriction's class extends over the ball.
    pub extends: bool,
    /// Sharp and extends.
    pub survives: bool,
    pub d_before: Rat,
    pub d_after: Rat,
    /// For a survivor: index of the earliest surviving class with the same
    /// boundary restriction (same spin-c class and self-square), if any.
    pub merged_into: Option<usize>,
}

/// Lifting report for a whole ambient data set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowdownReport {
    pub chi_before: Int,
    pub sigma_before: Int,
    pub chi_after: Int,
    pub sigma_after: Int,
    pub b2: usize,
    pub classes: Vec<ClassLift>,
    /// Surviving classes after merging restrictions that agree off the
    /// configuration.
    pub basic_class_count: usize,
}

/// Decide which ambient basic classes descend to the surgered manifold:
/// each must restrict sharply (`K^2 = -b2`) and extend over the ball;
/// survivors whose restrictions differ by twice a configuration class are
/// merged (they restrict to the complement identically).
pub fn lift_basic_classes(
    ctx: &CharLattice,
    ambient: &AmbientData,
    ball: &ExtensionReport,
) -> Result<BlowdownReport> {
    let b2 = ctx.rank();
    let minus_b2 = Rat::from_integer(Int::from(-(b2 as i64)));
    let extending = ball.extending_residues();
    let mut classes: Vec<ClassLift> = Vec::with_capacity(ambient.classes.len());
    for class in &ambient.classes {
        if class.pairings.len() != b2 {
            return Err(Error::DimensionMismatch {
                expected: b2,
                got: class.pairings.len(),
            });
        }
        let k = class.pairings.clone();
        let glue = characteristic_glue_check(ctx.form(), &k, &class.c1sq, &ambient.sigma);
        let characteristic = ctx.is_characteristic(&k);
        let square = ctx.square(&k);
        let sharp = square == minus_b2;
        let extends = characteristic && extending.contains(&ctx.residue(&k));
        let survives = sharp && extends;
        let c1sq = Rat::from_integer(class.c1sq.clone());
        let d_before = d_formal(&c1sq, &ambient.chi, &ambient.sigma);
        let chi_after = &ambient.chi - Int::from(b2 as i64);
        let sigma_after = &ambient.sigma + Int::from(b2 as i64);
        let d_after = d_formal(&(c1sq - square), &chi_after, &sigma_after);
        let merged_into = if survives {
            classes
                .iter()
                .position(|earlier: &ClassLift| {
                    earlier.survives
                        && earlier.merged_into.is_none()
                        && earlier.c1sq == class.c1sq
                        && ctx.same_class(&earlier.restriction, &k).is_some()
                })
        } else {
            None
        };
        classes.push(ClassLift {
            name: class.name.clone(),
            restriction: k.clone(),
            c1sq: class.c1sq.clone(),
            glue_characteristic: glue,
            taut: taut_check(ctx.form(), &k),
            sharp,
            extends,
            survives,
            d_before,
            d_after,
            merged_into,
        });
    }
    let basic_class_count = classes
        .iter()
        .filter(|c| c.survives && c.merged_into.is_none())
        .count();
    Ok(BlowdownReport {
        chi_before: ambient.chi.clone(),
        sigma_before: ambient.sigma.clone(),
        chi_after: &ambient.chi - Int::from(b2 as i64),
        sigma_after: &ambient.sigma + Int::from(b2 as i64),
        b2,
        classes,
        basic_class_count,
    })
}

fn parse_int(context: &'static str, line: usize, s: &str) -> Result<Int> {
    s.parse::<Int>().map_err(|_| Error::Parse {
        context,
        line,
        message: format!("expected an integer, got '{}'", s),
    })
}

fn parse_keyval<'a>(
    context: &'static str,
    line: usize,
    token: &'a str,
    key: &str,
) -> Result<&'a str> {
    token.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')).ok_or_else(|| {
        Error::Parse {
            context,
            line,
            message: format!("expected '{}=<value>', got '{}'", key, token),
        }
    })
}

/// Parse ambient data:
///
/// ```text
/// # comment
/// chi=38 sigma=-26
/// class K11 c1sq=-2 pair=1,3,0
/// ```
pub fn parse_ambient(text: &str) -> Result<AmbientData> {
    const CTX: &str = "ambient data";
    let mut header: Option<(Int, Int)> = None;
    let mut classes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0].starts_with("chi") {
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    context: CTX,
                    line: lineno,
                    message: "header must be 'chi=<n> sigma=<n>'".into(),
                });
            }
            let chi = parse_int(CTX, lineno, parse_keyval(CTX, lineno, tokens[0], "chi")?)?;
            let sigma = parse_int(CTX, lineno, parse_keyval(CTX, lineno, tokens[1], "sigma")?)?;
            if header.is_some() {
                return Err(Error::Parse {
                    context: CTX,
                    line: lineno,
                    message: "duplicate chi/sigma header".into(),
                });
            }
            header = Some((chi, sigma));
        } else if tokens[0] == "class" {
            if tokens.len() != 4 {
                return Err(Error::Parse {
                    context: CTX,
                    line: lineno,
                    message: "class line must be 'class <name> c1sq=<q> pair=<k1,...,kn>'".into(),
                });
            }
            let name = tokens[1].to_string();
            let c1sq = parse_int(CTX, lineno, parse_keyval(CTX, lineno, tokens[2], "c1sq")?)?;
            let pair_str = parse_keyval(CTX, lineno, tokens[3], "pair")?;
            let pairings = pair_str
                .split(',')
                .map(|s| parse_int(CTX, lineno, s.trim()))
                .collect::<Result<Vec<Int>>>()?;
            classes.push(AmbientClass {
                name,
                c1sq,
                pairings,
            });
        } else {
            return Err(Error::Parse {
                context: CTX,
                line: lineno,
                message: format!("unrecognized line '{}'", line),
            });
        }
    }
    let (chi, sigma) = header.ok_or(Error::Parse {
        context: CTX,
        line: 0,
        message: "missing 'chi=<n> sigma=<n>' header".into(),
    })?;
    Ok(AmbientData {
        chi,
        sigma,
        classes,
    })
}

/// Render ambient data in the file format `parse_ambient` reads.
pub fn format_ambient(data: &AmbientData) -> String {
    let mut out = format!("chi={} sigma={}\n", data.chi, data.sigma);
    for class in &data.classes {
        let pair: Vec<String> = class.pairings.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "class {} c1sq={} pair={}\n",
            class.name,
            class.c1sq,
            pair.join(",")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{extension_classes, owens_strle_check};
    use crate::matrix::vec_int;
    use crate::plumbing::{park_chain, wahl_graph, HandleSpec};

    fn handle(pairings: &[i64], framing: i64) -> HandleSpec {
        HandleSpec {
            pairings: vec_int(pairings),
            framing: Int::from(framing),
        }
    }

    fn c53() -> (PlumbingGraph, CharLattice) {
        let g = PlumbingGraph::chain(&[-3, -5, -2]);
        let ctx = CharLattice::from_graph(&g).unwrap();
        (g, ctx)
    }

    fn ambient(chi: i64, sigma: i64, classes: &[(&str, i64, &[i64])]) -> AmbientData {
        AmbientData {
            chi: Int::from(chi),
            sigma: Int::from(sigma),
            classes: classes
                .iter()
                .map(|(name, c1sq, pair)| AmbientClass {
                    name: name.to_string(),
                    c1sq: Int::from(*c1sq),
                    pairings: vec_int(pair),
                })
                .collect(),
        }
    }

    #[test]
    fn taut_fixtures() {
        let (g, ctx) = c53();
        assert!(taut_check(ctx.form(), &vec_int(&[1, 3, 0])));
        assert!(!taut_check(ctx.form(), &vec_int(&[3, -1, 0])));
        let wahl = CharLattice::from_graph(&wahl_graph(2, 2, 2).unwrap()).unwrap();
        assert!(!taut_check(wahl.form(), &vec_int(&[-4, 1, 1, 1])));

        assert!(taut_unique_path(&g, &vec_int(&[1, 3, 0])).unwrap());
        assert!(!taut_unique_path(&g, &vec_int(&[3, -1, 0])).unwrap());
        let single = PlumbingGraph::chain(&[-2]);
        assert!(taut_unique_path(&single, &vec_int(&[0])).unwrap());
    }

    #[test]
    fn formal_dimension() {
        let r = |n: i64, d: i64| Rat::new(Int::from(n), Int::from(d));
        assert_eq!(
            d_formal(&r(0, 1), &Int::from(4), &Int::from(0)),
            r(-2, 1)
        );
        // chi=47, sigma=-31: D = 0 forces c1^2 = 1.
        assert_eq!(
            d_formal(&r(1, 1), &Int::from(47), &Int::from(-31)),
            r(0, 1)
        );
    }

    #[test]
    fn shift_and_u_power_ledger() {
        let ledger = blowup_ledger(5).unwrap();
        let shifts: Vec<i64> = ledger.iter().map(|l| l.shift.to_string().parse().unwrap()).collect();
        let powers: Vec<i64> = ledger.iter().map(|l| l.u_power.to_string().parse().unwrap()).collect();
        assert_eq!(shifts, vec![0, -2, -6, -12, -20, -30]);
        assert_eq!(powers, vec![0, 1, 3, 6, 10, 15]);
        for l in &ledger {
            let n = l.n as i64;
            assert_eq!(l.shift, Int::from(-(n * n + n)));
            assert_eq!(l.u_power, Int::from(n * (n + 1) / 2));
        }

        // K' = K gives shift 0; distinct classes error out.
        let (_, ctx) = c53();
        assert_eq!(
            grrel_shift(&ctx, &vec_int(&[1, 3, 0]), &vec_int(&[1, 3, 0])).unwrap(),
            Int::from(0)
        );
        assert_eq!(
            grrel_shift(&ctx, &vec_int(&[3, -1, 0]), &vec_int(&[-3, 1, 0])).unwrap(),
            Int::from(0)
        );
        assert_eq!(
            grrel_shift(&ctx, &vec_int(&[1, 3, 0]), &vec_int(&[3, -1, 0])).unwrap_err(),
            Error::NotSameClass
        );

        // u_power edge cases on [[-1]].
        let form = IntMatrix::from_rows(vec![vec_int(&[-1])]);
        assert_eq!(
            u_power(&form, &vec_int(&[1]), &vec_int(&[0])).unwrap(),
            Int::from(0)
        );
        assert!(matches!(
            u_power(&form, &vec_int(&[-3]), &vec_int(&[-1])).unwrap_err(),
            Error::NegativeShift { .. }
        ));
        assert_eq!(
            u_power(&form, &vec_int(&[0]), &vec_int(&[1])).unwrap_err(),
            Error::NotCharacteristic { index: 0 }
        );
    }

    #[test]
    fn glue_parity_checks() {
        let wahl = CharLattice::from_graph(&wahl_graph(2, 2, 2).unwrap()).unwrap();
        assert!(characteristic_glue_check(
            wahl.form(),
            &vec_int(&[2, 1, 1, 1]),
            &Int::from(-4),
            &Int::from(-28)
        ));
        // Even entry on an odd-framed vertex.
        assert!(!characteristic_glue_check(
            wahl.form(),
            &vec_int(&[2, 0, 1, 1]),
            &Int::from(-4),
            &Int::from(-28)
        ));
        // Ambient square-signature congruence violated.
        assert!(!characteristic_glue_check(
            wahl.form(),
            &vec_int(&[2, 1, 1, 1]),
            &Int::from(-2),
            &Int::from(-28)
        ));
    }

    #[test]
    fn ambient_file_round_trip() {
        let text = "# fixture\nchi=38 sigma=-26\nclass K11 c1sq=-2 pair=1,3,0\nclass K1m1 c1sq=-2 pair=1,1,-2\n";
        let data = parse_ambient(text).unwrap();
        assert_eq!(data.chi, Int::from(38));
        assert_eq!(data.sigma, Int::from(-26));
        assert_eq!(data.classes.len(), 2);
        assert_eq!(data.classes[1].pairings, vec_int(&[1, 1, -2]));
        let rendered = format_ambient(&data);
        assert_eq!(parse_ambient(&rendered).unwrap(), data);

        assert!(matches!(
            parse_ambient("class K c1sq=0 pair=1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ambient("chi=1 sigma=2\nwhat\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ambient("chi=1 sigma=2\nclass K c1sq=x pair=1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn lift_e2_over_c21() {
        let g = park_chain(&Int::from(2), &Int::from(1)).unwrap();
        let ctx = CharLattice::from_graph(&g).unwrap();
        let ball = extension_classes(&ctx, &handle(&[-2], -1)).unwrap();
        let data = ambient(24, -16, &[("0", 0, &[0])]);
        let report = lift_basic_classes(&ctx, &data, &ball).unwrap();
        assert_eq!(report.classes.len(), 1);
        let row = &report.classes[0];
        assert!(row.glue_characteristic);
        assert!(!row.sharp && !row.extends && !row.survives);
        assert_eq!(report.basic_class_count, 0);
        assert_eq!(report.chi_after, Int::from(23));
        assert_eq!(report.sigma_after, Int::from(-15));

        // The surviving restrictions would need K = ±2.
        for k in [2i64, -2] {
            let data = ambient(24, -16, &[("k", -4, &[k])]);
            let report = lift_basic_classes(&ctx, &data, &ball).unwrap();
            assert!(report.classes[0].survives, "K = {}", k);
            assert_eq!(report.classes[0].d_before, report.classes[0].d_after);
        }
    }

    #[test]
    fn lift_e3_2blowups_over_c53() {
        let (_, ctx) = c53();
        let ball = extension_classes(&ctx, &handle(&[1, 0, 1], -1)).unwrap();
        assert_eq!(ball.kernel, vec_int(&[2, 1, 3, 5]));
        assert!(owens_strle_check(&ctx, &ball).unwrap().holds);

        // All eight basic classes of E(3)#2CP~2: pairings (1, 2a1+a2, -a1+a2)
        // and negatives, c1^2 = -2.
        let pairs: [[i64; 3]; 8] = [
            [1, 3, 0],
            [1, 1, -2],
            [1, -1, 2],
            [1, -3, 0],
            [-1, -3, 0],
            [-1, -1, 2],
            [-1, 1, -2],
            [-1, 3, 0],
        ];
        let data = AmbientData {
            chi: Int::from(38),
            sigma: Int::from(-26),
            classes: pairs
                .iter()
                .enumerate()
                .map(|(i, p)| AmbientClass {
                    name: format!("K{}", i),
                    c1sq: Int::from(-2),
                    pairings: vec_int(&p[..]),
                })
                .collect(),
        };
        let report = lift_basic_classes(&ctx, &data, &ball).unwrap();
        let survivors: Vec<&ClassLift> =
            report.classes.iter().filter(|c| c.survives).collect();
        assert_eq!(survivors.len(), 2);
        let mut restrictions: Vec<&[Int]> =
            survivors.iter().map(|c| &c.restriction[..]).collect();
        restrictions.sort();
        assert_eq!(
            restrictions,
            [&vec_int(&[-1, -3, 0])[..], &vec_int(&[1, 3, 0])[..]]
        );
        assert_eq!(report.basic_class_count, 2);
        assert!(report.classes.iter().all(|c| c.glue_characteristic));
        for c in &survivors {
            assert_eq!(c.d_before, c.d_after);
            assert!(c.taut);
        }
    }

    #[test]
    fn lift_e4_3blowups_over_l257_chain() {
        let g = PlumbingGraph::chain(&[-4, -3, -2, -2]);
        let ctx = CharLattice::from_graph(&g).unwrap();
        let ball = extension_classes(&ctx, &handle(&[-1, -1, 0, 0], -1)).unwrap();
        assert_eq!(ball.kernel, vec_int(&[-2, -3, -2, -1, 5]));
        assert!(owens_strle_check(&ctx, &ball).unwrap().holds);

        // 24 classes: (k, -a1, a1-a2, a2-a3) for k in {-2,0,2}, a in {±1}^3.
        let mut classes = Vec::new();
        for k in [-2i64, 0, 2] {
            for bits in 0..8u32 {
                let a: Vec<i64> = (0..3)
                    .map(|b| if bits >> b & 1 == 0 { 1 } else { -1 })
                    .collect();
                classes.push(AmbientClass {
                    name: format!("L{}a{}{}{}", k, a[0], a[1], a[2]),
                    c1sq: Int::from(-3),
                    pairings: vec_int(&[k, -a[0], a[0] - a[1], a[1] - a[2]]),
                });
            }
        }
        let data = AmbientData {
            chi: Int::from(51),
            sigma: Int::from(-35),
            classes,
        };
        let report = lift_basic_classes(&ctx, &data, &ball).unwrap();
        assert_eq!(report.classes.len(), 24);
        let survivors: Vec<&ClassLift> =
            report.classes.iter().filter(|c| c.survives).collect();
        assert_eq!(survivors.len(), 6);
        // The two merged families are the second full path's three vectors
        // and their conjugates.
        assert_eq!(report.basic_class_count, 2);
        let mut surviving_restrictions: Vec<Vec<Int>> =
            survivors.iter().map(|c| c.restriction.clone()).collect();
        surviving_restrictions.sort();
        let expected: Vec<Vec<Int>> = [
            [-2, -1, 0, 2],
            [-2, -1, 2, -2],
            [-2, 1, -2, 0],
            [2, -1, 2, 0],
            [2, 1, -2, 2],
            [2, 1, 0, -2],
        ]
        .iter()
        .map(|r| vec_int(&r[..]))
        .collect();
        assert_eq!(surviving_restrictions, expected);
        // X_B bookkeeping: chi 47, sigma -31, c1^2 becomes 1, D stays 0.
        assert_eq!(report.chi_after, Int::from(47));
        assert_eq!(report.sigma_after, Int::from(-31));
        for c in &survivors {
            assert_eq!(c.d_before, Rat::from_integer(Int::from(0)));
            assert_eq!(c.d_after, Rat::from_integer(Int::from(0)));
        }
    }

    #[test]
    fn lift_e3_4blowups_over_wahl() {
        let ctx = CharLattice::from_graph(&wahl_graph(2, 2, 2).unwrap()).unwrap();
        let ball = extension_classes(&ctx, &handle(&[1, -1, 1, 0], -1)).unwrap();
        let pairs: [[i64; 4]; 8] = [
            [2, 1, 1, 1],
            [-2, -1, -1, -1],
            [0, 1, 1, 1],
            [0, -1, -1, -1],
            [-2, 1, 1, 1],
            [2, -1, -1, -1],
            [-4, 1, 1, 1],
            [4, -1, -1, -1],
        ];
        let data = AmbientData {
            chi: Int::from(40),
            sigma: Int::from(-28),
            classes: pairs
                .iter()
                .enumerate()
                .map(|(i, p)| AmbientClass {
                    name: format!("K{}", i),
                    c1sq: Int::from(-4),
                    pairings: vec_int(&p[..]),
                })
                .collect(),
        };
        let report = lift_basic_classes(&ctx, &data, &ball).unwrap();
        let survivors: Vec<(usize, &ClassLift)> = report
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.survives)
            .collect();
        assert_eq!(survivors.len(), 4);
        assert_eq!(report.basic_class_count, 3);
        // (-4,1,1,1) and (4,-1,-1,-1) merge; the non-taut survivor is flagged.
        let merged: Vec<&ClassLift> = report
            .classes
            .iter()
            .filter(|c| c.merged_into.is_some())
            .collect();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].restriction, vec_int(&[4, -1, -1, -1]));
        assert_eq!(merged[0].merged_into, Some(6));
        let non_taut_survivors: Vec<&ClassLift> = report
            .classes
            .iter()
            .filter(|c| c.survives && !c.taut)
            .collect();
        assert_eq!(non_taut_survivors.len(), 2);
    }
}
