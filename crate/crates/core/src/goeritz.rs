//! Checkerboard forms of alternating link diagrams.
//!
//! An alternating diagram is recorded as its white-region incidence list:
//! for each crossing, the two white regions it joins and a sign. For an
//! alternating projection every crossing carries the same checkerboard sign,
//! so a uniform sign is exactly what the validator demands. The associated
//! symmetric form (off-diagonal entries minus the signed crossing counts,
//! diagonal the negated row sum, one basepoint region deleted) is negative
//! definite for the correct orientation of the double branched cover; the
//! constructor tries both orientation conventions and reports which one
//! succeeded.

use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::plumbing::PlumbingGraph;
use num_traits::{Signed, Zero};

/// An alternating link diagram as a white-region incidence list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingDiagram {
    regions: usize,
    crossings: Vec<(usize, usize, i64)>,
}

impl AlternatingDiagram {
    /// Validate and build a diagram: region indices in range, no crossing
    /// joining a region to itself, uniform sign (±1) across all crossings
    /// (the alternation condition visible at this data level), and a
    /// connected region-incidence graph (non-split).
    pub fn new(regions: usize, crossings: Vec<(usize, usize, i64)>) -> Result<Self> {
        if regions < 2 {
            return Err(Error::BadGraph(
                "a diagram needs at least two white regions".into(),
            ));
        }
        if crossings.is_empty() {
            return Err(Error::BadGraph("a diagram needs at least one crossing".into()));
        }
        for (idx, &(a, b, s)) in crossings.iter().enumerate() {
            if a >= regions || b >= regions {
                return Err(Error::BadGraph(format!(
                    "crossing {} joins region {} but only {} regions are declared",
                    idx,
                    a.max(b),
                    regions
                )));
            }
            if a == b {
                return Err(Error::BadGraph(format!(
                    "crossing {} joins region {} to itself",
                    idx, a
                )));
            }
            if s != 1 && s != -1 {
                return Err(Error::NotAlternating { crossing: idx });
            }
            if s != crossings[0].2 {
                return Err(Error::NotAlternating { crossing: idx });
            }
        }
        // Non-split: the white regions must form one incidence component.
        let mut seen = vec![false; regions];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(r) = stack.pop() {
            for &(a, b, _) in &crossings {
                let other = if a == r {
                    b
                } else if b == r {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::SplitDiagram);
        }
        Ok(AlternatingDiagram { regions, crossings })
    }

    pub fn regions(&self) -> usize {
        self.regions
    }

    pub fn crossings(&self) -> &[(usize, usize, i64)] {
        &self.crossings
    }

    /// Full symmetric matrix over all white regions (before deleting a
    /// basepoint): entry (i, j) is minus the signed count of crossings
    /// joining i and j; the diagonal is the negated off-diagonal row sum.
    pub fn full_matrix(&self) -> IntMatrix {
        let n = self.regions;
        let mut m = IntMatrix::zeros(n, n);
        for &(a, b, s) in &self.crossings {
            let v = m.get(a, b) - Int::from(s);
            m.set(a, b, v.clone());
            m.set(b, a, v);
        }
        for i in 0..n {
            let row_sum: Int = (0..n).filter(|&j| j != i).map(|j| m.get(i, j)).sum();
            m.set(i, i, -row_sum);
        }
        m
    }
}

/// The checkerboard form of a diagram with one region deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoeritzForm {
    /// Negative definite symmetric form on the non-basepoint regions
    /// (original region order with the basepoint removed).
    pub form: IntMatrix,
    pub basepoint: usize,
    /// True when the opposite orientation convention (global sign flip) was
    /// the one that produced a negative definite form.
    pub flipped: bool,
}

/// Build the checkerboard form: delete the basepoint region, then demand
/// negative definiteness, retrying once with the orientation convention
/// flipped (form negated).
pub fn goeritz_form(d: &AlternatingDiagram, basepoint: usize) -> Result<GoeritzForm> {
    if basepoint >= d.regions() {
        return Err(Error::BadGraph(format!(
            "basepoint region {} out of range (diagram has {} regions)",
            basepoint,
            d.regions()
        )));
    }
    let m = d.full_matrix().delete_row_col(basepoint);
    if m.is_negative_definite()? {
        return Ok(GoeritzForm {
            form: m,
            basepoint,
            flipped: false,
        });
    }
    let neg = m.neg();
    if neg.is_negative_definite()? {
        return Ok(GoeritzForm {
            form: neg,
            basepoint,
            flipped: true,
        });
    }
    Err(Error::NotDefiniteEitherOrientation)
}

/// Link-determinant cross-check: |det| of the checkerboard matrix with the
/// last region deleted. Basepoint choice does not change the value.
pub fn det_check(d: &AlternatingDiagram) -> Result<Int> {
    let m = d.full_matrix().delete_row_col(d.regions() - 1);
    Ok(m.det()?.abs())
}

/// Diagram for the ribbon family, in either checkerboard color.
///
/// Non-mirror (white) color, `2n + 1` regions: a ring of regions
/// `v_1 .. v_n` (single ring crossings for `n >= 3`, a doubled pair for
/// `n = 2`, none for `n = 1`), pendant regions `w_1 .. w_n` with one
/// crossing `v_i w_i` each, and an outer region `o` met once by every `w_i`.
///
/// Mirror color, `n + 1` regions: peripherals `p_1 .. p_n` in a ring with
/// doubled crossings and a center region `c` met once by each peripheral.
pub fn family_diagram(n: u32, mirror: bool) -> Result<AlternatingDiagram> {
    if n == 0 {
        return Err(Error::BadGraph("family index must be at least 1".into()));
    }
    let n = n as usize;
    let mut crossings: Vec<(usize, usize, i64)> = Vec::new();
    if mirror {
        // p_i = i, c = n.
        for i in 0..n {
            crossings.push((i, n, -1));
        }
        match n {
            1 => {}
            2 => crossings.extend([(0, 1, -1); 4]),
            _ => {
                for i in 0..n {
                    let j = (i + 1) % n;
                    crossings.push((i, j, -1));
                    crossings.push((i, j, -1));
                }
            }
        }
        AlternatingDiagram::new(n + 1, crossings)
    } else {
        // v_i = i, w_i = n + i, o = 2n.
        for i in 0..n {
            crossings.push((i, n + i, -1));
            crossings.push((n + i, 2 * n, -1));
        }
        match n {
            1 => {}
            2 => crossings.extend([(0, 1, -1); 2]),
            _ => {
                for i in 0..n {
                    crossings.push((i, (i + 1) % n, -1));
                }
            }
        }
        AlternatingDiagram::new(2 * n + 1, crossings)
    }
}

/// Default basepoint for `family_diagram`: the outer region (white color)
/// or the last peripheral (mirror color).
pub fn family_basepoint(n: u32, mirror: bool) -> usize {
    let n = n as usize;
    if mirror {
        n - 1
    } else {
        2 * n
    }
}

/// Intersection form of the ribbon family.
///
/// White color: `2n x 2n` in the coordinate order `v_1 .. v_n, w_1 .. w_n`
/// (for `n = 3` this is exactly the triangle-of-(-3)s-with-(-2)-pendants
/// graph form). Mirror color: `n x n` in the order `p_1, c, p_2 .. p_{n-1}`,
/// which for `n = 3` reproduces `[[-5,1,2],[1,-3,1],[2,1,-5]]` verbatim.
pub fn family_form(n: u32, mirror: bool) -> Result<IntMatrix> {
    let d = family_diagram(n, mirror)?;
    let g = goeritz_form(&d, family_basepoint(n, mirror))?;
    debug_assert!(!g.flipped);
    if mirror && n >= 3 {
        // goeritz_form leaves (p_1 .. p_{n-1}, c); move c to second place.
        let m = n as usize;
        let mut perm = Vec::with_capacity(m);
        perm.push(0);
        perm.push(m - 1);
        perm.extend(1..m - 1);
        Ok(g.form.permute(&perm))
    } else {
        Ok(g.form)
    }
}

/// Convert a form with non-negative off-diagonal entries into a plumbing
/// graph (vertices `g1..gn` weighted by the diagonal, edge multiplicities
/// from the off-diagonal), so checkerboard forms can feed every pipeline
/// that consumes graph files.
pub fn form_to_graph(form: &IntMatrix) -> Result<PlumbingGraph> {
    let n = form.require_square()?;
    form.require_symmetric()?;
    let mut g = PlumbingGraph::new();
    for i in 0..n {
        g.add_vertex(&format!("g{}", i + 1), form.get(i, i).clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            let m = form.get(i, j);
            if m.is_negative() {
                return Err(Error::BadGraph(format!(
                    "entry ({}, {}) is negative; not a plumbing pairing",
                    i, j
                )));
            }
            if !m.is_zero() {
                let mult: u32 = m.to_string().parse().map_err(|_| {
                    Error::BadGraph(format!("pairing ({}, {}) too large for an edge", i, j))
                })?;
                g.add_edge_multi(i, j, mult)?;
            }
        }
    }
    Ok(g)
}

const CTX: &str = "diagram";

/// Parse a diagram file: header `regions <w>`, then one `x <a> <b> <sign>`
/// line per crossing (0-based regions). `#` starts a comment.
pub fn parse_diagram(text: &str) -> Result<AlternatingDiagram> {
    let mut regions: Option<usize> = None;
    let mut crossings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "regions" => {
                if tokens.len() != 2 {
                    return Err(Error::Parse {
                        context: CTX,
                        line: lineno,
                        message: "expected 'regions <count>'".into(),
                    });
                }
                let w: usize = tokens[1].parse().map_err(|_| Error::Parse {
                    context: CTX,
                    line: lineno,
                    message: format!("bad region count '{}'", tokens[1]),
                })?;
                regions = Some(w);
            }
            "x" => {
                if tokens.len() != 4 {
                    return Err(Error::Parse {
                        context: CTX,
                        line: lineno,
                        message: "expected 'x <regionA> <regionB> <sign>'".into(),
                    });
                }
                let parse = |s: &str| -> Result<i64> {
                    s.parse().map_err(|_| Error::Parse {
                        context: CTX,
                        line: lineno,
                        message: format!("bad number '{}'", s),
                    })
                };
                let a = parse(tokens[1])?;
                let b = parse(tokens[2])?;
                let s = parse(tokens[3])?;
                if a < 0 || b < 0 {
                    return Err(Error::Parse {
                        context: CTX,
                        line: lineno,
                        message: "regions are 0-based and non-negative".into(),
                    });
                }
                crossings.push((a as usize, b as usize, s));
            }
            other => {
                return Err(Error::Parse {
                    context: CTX,
                    line: lineno,
                    message: format!("unrecognized line '{}'", other),
                });
            }
        }
    }
    let regions = regions.ok_or(Error::Parse {
        context: CTX,
        line: 0,
        message: "missing 'regions <count>' header".into(),
    })?;
    AlternatingDiagram::new(regions, crossings)
}

/// Render a diagram in the format `parse_diagram` reads.
pub fn format_diagram(d: &AlternatingDiagram) -> String {
    let mut out = format!("regions {}\n", d.regions());
    for &(a, b, s) in d.crossings() {
        out.push_str(&format!("x {} {} {}\n", a, b, s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dinv::{d_table, DTableOptions};
    use crate::matrix::{Rat, RatMatrix};
    use crate::spinc::CharLattice;

    fn trefoil(sign: i64) -> AlternatingDiagram {
        AlternatingDiagram::new(3, vec![(0, 1, sign), (1, 2, sign), (0, 2, sign)]).unwrap()
    }

    fn spectrum(form: &IntMatrix) -> Vec<Rat> {
        let ctx = CharLattice::new(form.clone()).unwrap();
        let table = d_table(&ctx, &DTableOptions::default()).unwrap();
        assert!(table.stabilized);
        table.d_spectrum()
    }

    #[test]
    fn trefoil_form_and_determinant() {
        let d = trefoil(-1);
        let g = goeritz_form(&d, 2).unwrap();
        assert!(!g.flipped);
        assert_eq!(g.form, IntMatrix::from_i64(&[&[-2, 1], &[1, -2]]));
        assert_eq!(det_check(&d).unwrap(), Int::from(3));

        // Opposite crossing signs succeed through the flipped convention.
        let g2 = goeritz_form(&trefoil(1), 2).unwrap();
        assert!(g2.flipped);
        assert_eq!(g2.form, g.form);
    }

    #[test]
    fn diagram_validation() {
        assert_eq!(
            AlternatingDiagram::new(3, vec![(0, 1, -1), (1, 2, 1), (0, 2, -1)]).unwrap_err(),
            Error::NotAlternating { crossing: 1 }
        );
        assert_eq!(
            AlternatingDiagram::new(2, vec![(0, 1, 2)]).unwrap_err(),
            Error::NotAlternating { crossing: 0 }
        );
        assert_eq!(
            AlternatingDiagram::new(4, vec![(0, 1, -1), (2, 3, -1)]).unwrap_err(),
            Error::SplitDiagram
        );
        assert!(matches!(
            AlternatingDiagram::new(2, vec![(0, 2, -1)]).unwrap_err(),
            Error::BadGraph(_)
        ));
        assert!(matches!(
            AlternatingDiagram::new(2, vec![(1, 1, -1)]).unwrap_err(),
            Error::BadGraph(_)
        ));
        assert!(matches!(
            goeritz_form(&trefoil(-1), 5).unwrap_err(),
            Error::BadGraph(_)
        ));
    }

    #[test]
    fn family_forms_small() {
        assert_eq!(
            family_form(1, false).unwrap(),
            IntMatrix::from_i64(&[&[-1, 1], &[1, -2]])
        );
        assert_eq!(family_form(1, true).unwrap(), IntMatrix::from_i64(&[&[-1]]));
        assert_eq!(
            family_form(2, true).unwrap(),
            IntMatrix::from_i64(&[&[-5, 1], &[1, -2]])
        );
        assert_eq!(
            family_form(2, false).unwrap(),
            IntMatrix::from_i64(&[
                &[-3, 2, 1, 0],
                &[2, -3, 0, 1],
                &[1, 0, -2, 0],
                &[0, 1, 0, -2]
            ])
        );
        // Mirror n=3 reproduces the printed matrix verbatim.
        assert_eq!(
            family_form(3, true).unwrap(),
            IntMatrix::from_i64(&[&[-5, 1, 2], &[1, -3, 1], &[2, 1, -5]])
        );
        // White n=3 is exactly the triangle-with-pendants graph form.
        let mut g = PlumbingGraph::new();
        for i in 0..3 {
            g.add_vertex(&format!("v{}", i + 1), Int::from(-3));
        }
        for i in 0..3 {
            g.add_vertex(&format!("w{}", i + 1), Int::from(-2));
        }
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        g.add_edge(1, 4).unwrap();
        g.add_edge(2, 5).unwrap();
        assert_eq!(family_form(3, false).unwrap(), g.intersection_form());

        assert!(matches!(family_form(0, false), Err(Error::BadGraph(_))));
    }

    #[test]
    fn family_determinants() {
        for n in 1..=5u32 {
            let expect = Int::from((1i64 << n) - 1).pow(2);
            for mirror in [false, true] {
                let d = family_diagram(n, mirror).unwrap();
                assert_eq!(det_check(&d).unwrap(), expect, "n={} mirror={}", n, mirror);
                let form = family_form(n, mirror).unwrap();
                assert!(form.is_negative_definite().unwrap());
                assert_eq!(form.det().unwrap().abs(), expect);
            }
        }
    }

    #[test]
    fn printed_inverse_matrices() {
        let inv = |m: &IntMatrix| m.invert().unwrap();
        let seventh = |num: i64| Rat::new(Int::from(-num), Int::from(7));
        let white = inv(&family_form(3, false).unwrap());
        let expect: [[i64; 6]; 6] = [
            [6, 4, 4, 3, 2, 2],
            [4, 6, 4, 2, 3, 2],
            [4, 4, 6, 2, 2, 3],
            [3, 2, 2, 5, 1, 1],
            [2, 3, 2, 1, 5, 1],
            [2, 2, 3, 1, 1, 5],
        ];
        let expect_m = RatMatrix::from_rows(
            expect
                .iter()
                .map(|row| row.iter().map(|&v| seventh(v)).collect())
                .collect(),
        );
        assert_eq!(white, expect_m);

        let mirror = inv(&family_form(3, true).unwrap());
        let expect: [[i64; 3]; 3] = [[2, 1, 1], [1, 3, 1], [1, 1, 2]];
        let expect_m = RatMatrix::from_rows(
            expect
                .iter()
                .map(|row| row.iter().map(|&v| seventh(v)).collect())
                .collect(),
        );
        assert_eq!(mirror, expect_m);
    }

    #[test]
    fn d_spectrum_congruences() {
        // Same diagram, different basepoint: congruent forms, equal spectra.
        let mirror3 = family_form(3, true).unwrap();
        let center_deleted = goeritz_form(&family_diagram(3, true).unwrap(), 3)
            .unwrap()
            .form;
        assert_eq!(
            center_deleted,
            IntMatrix::from_i64(&[&[-5, 2, 2], &[2, -5, 2], &[2, 2, -5]])
        );
        assert_eq!(spectrum(&mirror3), spectrum(&center_deleted));

        // Orientation pinning: the small family members match lens chains.
        assert_eq!(
            spectrum(&family_form(2, false).unwrap()),
            spectrum(&PlumbingGraph::chain(&[-2, -2, -2, -3]).intersection_form())
        );
        assert_eq!(
            spectrum(&family_form(2, true).unwrap()),
            spectrum(&PlumbingGraph::chain(&[-5, -2]).intersection_form())
        );
    }

    #[test]
    fn family_cyclic_symmetry() {
        // v_i -> v_{i+1}, w_i -> w_{i+1} is a form isometry.
        for n in 2..=5usize {
            let form = family_form(n as u32, false).unwrap();
            let mut perm = Vec::with_capacity(2 * n);
            perm.extend((0..n).map(|i| (i + 1) % n));
            perm.extend((0..n).map(|i| n + (i + 1) % n));
            assert_eq!(form.permute(&perm), form, "n={}", n);
        }
    }

    #[test]
    fn diagram_file_round_trip() {
        let d = family_diagram(3, false).unwrap();
        let text = format_diagram(&d);
        assert_eq!(parse_diagram(&text).unwrap(), d);

        let manual = "# trefoil\nregions 3\nx 0 1 -1\nx 1 2 -1\nx 0 2 -1\n";
        assert_eq!(parse_diagram(manual).unwrap(), trefoil(-1));

        assert!(matches!(
            parse_diagram("x 0 1 -1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_diagram("regions 3\nx 0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_diagram("regions two\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn graph_emission() {
        let g = form_to_graph(&family_form(3, false).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.intersection_form(), family_form(3, false).unwrap());
        // Doubled edge survives the round trip.
        let g2 = form_to_graph(&family_form(2, false).unwrap()).unwrap();
        assert_eq!(g2.intersection_form(), family_form(2, false).unwrap());
        // Negative off-diagonal entries are not plumbing pairings.
        let bad = IntMatrix::from_i64(&[&[-2, -1], &[-1, -2]]);
        assert!(matches!(form_to_graph(&bad), Err(Error::BadGraph(_))));
    }
}
