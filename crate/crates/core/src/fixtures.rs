//! Re-derivation of every worked example as named check reports.
//!
//! Each fixture function recomputes one worked example through the public
//! library API and diffs the results against stored expectations. Nothing
//! here panics on a mismatch: every comparison becomes a [`Check`] so the
//! CLI can print a full pass/fail table and exit nonzero on any failure.

use crate::ball::{
    cyclic_progression_check, enhanced_matrix, extension_classes, extension_subgroup_orbits,
    owens_strle_check_with, ExtensionReport,
};
use crate::blowdown::{
    blowup_ledger, lift_basic_classes, taut_check, AmbientClass, AmbientData, BlowdownReport,
};
use crate::dinv::{condition2_path_pairs, d_table, full_path, sharp_vectors, DTableOptions, PathTerminal};
use crate::error::Result;
use crate::goeritz::{det_check, family_diagram, family_form, goeritz_form, AlternatingDiagram};
use crate::lens::{chain_boundary, lens_equiv, lens_equiv_unoriented, park_dual, LensSpace};
use crate::matrix::{vec_int, Int, IntMatrix, Rat, RatMatrix};
use crate::plumbing::{
    mn_family_graph, park_chain, seifert_star, wahl_graph, HandleSpec, PlumbingGraph,
    RayConvention,
};
use crate::spinc::CharLattice;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// One verified statement about a worked example.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    /// What was computed (shown on failure, kept short on success).
    pub detail: String,
}

/// All checks for one named example.
#[derive(Clone, Debug)]
pub struct FixtureReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl FixtureReport {
    fn new(name: &'static str) -> Self {
        FixtureReport {
            name,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, label: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            label: label.to_string(),
            pass,
            detail,
        });
    }

    fn check(&mut self, label: &str, pass: bool) {
        self.push(label, pass, String::new());
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, label: &str, got: T, want: T) {
        let pass = got == want;
        let detail = if pass {
            String::new()
        } else {
            format!("got {:?}, want {:?}", got, want)
        };
        self.push(label, pass, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn handle(pairings: &[i64], framing: i64) -> HandleSpec {
    HandleSpec {
        pairings: vec_int(pairings),
        framing: Int::from(framing),
    }
}

fn rat_matrix_scaled(num: &[&[i64]], den: i64) -> RatMatrix {
    RatMatrix::from_rows(
        num.iter()
            .map(|row| {
                row.iter()
                    .map(|&v| Rat::new(Int::from(-v), Int::from(den)))
                    .collect()
            })
            .collect(),
    )
}

fn residue_set(ctx: &CharLattice, vectors: &[&[i64]]) -> BTreeSet<Vec<Int>> {
    vectors.iter().map(|v| ctx.residue(&vec_int(v))).collect()
}

fn knot941_graph() -> PlumbingGraph {
    let mut g = PlumbingGraph::new();
    for (i, w) in [-3i64, -3, -3, -2, -2, -2].iter().enumerate() {
        g.add_vertex(&format!("v{}", i + 1), Int::from(*w));
    }
    for (a, b) in [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)] {
        g.add_edge(a, b).unwrap();
    }
    g
}

fn check_path(
    r: &mut FixtureReport,
    g: &PlumbingGraph,
    start: &[i64],
    terminal: &[i64],
    moves: &[usize],
) -> Result<()> {
    let p = full_path(g, &vec_int(start))?;
    r.eq(
        &format!("path from {:?}: terminal vector", start),
        p.terminal_vector().to_vec(),
        vec_int(terminal),
    );
    r.eq(&format!("path from {:?}: moves", start), p.moves.clone(), moves.to_vec());
    r.eq(
        &format!("path from {:?}: ends in band", start),
        p.terminal.clone(),
        PathTerminal::InBand,
    );
    Ok(())
}

fn check_owens_strle(
    r: &mut FixtureReport,
    ctx: &CharLattice,
    report: &ExtensionReport,
    expect_extending: usize,
) -> Result<()> {
    let table = d_table(ctx, &DTableOptions::default())?;
    let cert = owens_strle_check_with(report, &table);
    r.eq("extending class count", cert.extending, expect_extending);
    r.check("square law (#ext)^2 = |det|", cert.square_law);
    r.check("every extending class has d = 0", cert.all_d_zero);
    r.check("Owens-Strle certificate holds", cert.holds);
    Ok(())
}

/// The (-3, -5, -2) chain: boxes, sharp vectors, paths, inverse matrices,
/// d = 0 classes, and its rational-ball extension data.
pub fn c53() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("c53-chain");
    let g = PlumbingGraph::chain(&[-3, -5, -2]);
    let ctx = CharLattice::from_graph(&g)?;
    r.eq("determinant", ctx.det().clone(), Int::from(-25));
    r.eq(
        "initial-box vector count",
        ctx.char_box(crate::spinc::BoxPreset::Initial).count(),
        Int::from(30),
    );

    let sharp: Vec<Vec<Int>> = sharp_vectors(&ctx)?
        .into_iter()
        .flat_map(|c| c.vectors)
        .collect();
    let expected: Vec<Vec<Int>> = [
        [-1, -3, 0],
        [-1, 1, 2],
        [1, -3, 2],
        [1, 3, 0],
        [3, -1, 0],
    ]
    .iter()
    .map(|v| vec_int(&v[..]))
    .collect();
    r.eq("sharp vectors (exactly five)", sharp, expected);

    for start in [[1i64, 3, 0], [-1, -3, 0]] {
        let p = full_path(&g, &vec_int(&start))?;
        r.check(&format!("{:?} is taut (path length 1)", start), p.is_taut() && p.len() == 1);
    }
    check_path(&mut r, &g, &[3, -1, 0], &[-3, 1, 0], &[0])?;
    check_path(&mut r, &g, &[-1, 1, 2], &[-1, 3, -2], &[2])?;
    check_path(&mut r, &g, &[1, -3, 2], &[1, -1, -2], &[2])?;

    r.check("taut test accepts (1,3,0)", taut_check(ctx.form(), &vec_int(&[1, 3, 0])));
    r.check("taut test rejects (3,-1,0)", !taut_check(ctx.form(), &vec_int(&[3, -1, 0])));

    // The printed inverse belongs to the reversed chain; both are checked.
    let reversed = PlumbingGraph::chain(&[-2, -5, -3]).intersection_form();
    r.eq(
        "printed inverse (reversed chain)",
        reversed.invert()?,
        rat_matrix_scaled(&[&[14, 3, 1], &[3, 6, 2], &[1, 2, 9]], 25),
    );
    r.eq(
        "true inverse of the figure chain",
        ctx.form().invert()?,
        rat_matrix_scaled(&[&[9, 2, 1], &[2, 6, 3], &[1, 3, 14]], 25),
    );

    let table = d_table(&ctx, &DTableOptions::default())?;
    r.check("d-table stabilized", table.stabilized);
    r.eq("class count", table.rows.len(), 25);
    r.eq("d = 0 class count", table.zero_d_rows().len(), 5);

    let pairs = condition2_path_pairs(&g)?;
    r.check(
        "one condition-2 path pair per class",
        pairs.len() == 25 && pairs.values().all(|&c| c == 1),
    );

    let report = extension_classes(&ctx, &handle(&[1, 0, 1], -1))?;
    r.eq("handle kernel", report.kernel.clone(), vec_int(&[2, 1, 3, 5]));
    let d0: BTreeSet<Vec<Int>> = table.zero_d_rows().iter().map(|row| row.residue.clone()).collect();
    r.eq("extension set = d = 0 set", report.extending_residues(), d0);
    check_owens_strle(&mut r, &ctx, &report, 5)?;
    r.check("extenders form an arithmetic progression", cyclic_progression_check(&ctx, &report)?);
    Ok(r)
}

/// Wahl plumbing W(2,2,2): printed form, inverse, enhanced matrix, kernel,
/// the nine extending classes, and the square law.
pub fn wahl222() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("wahl-2-2-2");
    let g = wahl_graph(2, 2, 2)?;
    let ctx = CharLattice::from_graph(&g)?;
    r.eq(
        "printed intersection form",
        ctx.form().clone(),
        IntMatrix::from_i64(&[
            &[-4, 1, 1, 1],
            &[1, -3, 0, 0],
            &[1, 0, -3, 0],
            &[1, 0, 0, -3],
        ]),
    );
    r.eq(
        "printed inverse",
        ctx.form().invert()?,
        rat_matrix_scaled(
            &[
                &[27, 9, 9, 9],
                &[9, 30, 3, 3],
                &[9, 3, 30, 3],
                &[9, 3, 3, 30],
            ],
            81,
        ),
    );
    r.eq("determinant", ctx.det().clone(), Int::from(81));
    r.eq(
        "invariant factors",
        ctx.invariant_factors().to_vec(),
        vec_int(&[1, 1, 3, 27]),
    );
    r.eq(
        "initial-box vector count",
        ctx.char_box(crate::spinc::BoxPreset::Initial).count(),
        Int::from(108),
    );

    let spec = handle(&[1, -1, 1, 0], -1);
    let enhanced = enhanced_matrix(ctx.form(), &spec)?;
    r.eq(
        "printed enhanced matrix",
        enhanced,
        IntMatrix::from_i64(&[
            &[-4, 1, 1, 1, 1],
            &[1, -3, 0, 0, -1],
            &[1, 0, -3, 0, 1],
            &[1, 0, 0, -3, 0],
            &[1, -1, 1, 0, -1],
        ]),
    );
    let report = extension_classes(&ctx, &spec)?;
    r.eq("printed kernel", report.kernel.clone(), vec_int(&[3, -2, 4, 1, 9]));
    r.check("divisibility and parity verdicts agree", !report.parity_disagrees);

    let printed: [&[i64]; 9] = [
        &[2, 1, 1, 1],
        &[-2, -1, -1, -1],
        &[-2, 3, 1, -1],
        &[0, 1, 3, -1],
        &[4, -1, -1, -1],
        &[-2, 1, -1, 3],
        &[0, 3, -1, 1],
        &[-2, -1, 3, 1],
        &[0, -1, 1, 3],
    ];
    r.eq(
        "the nine printed extending classes",
        report.extending_residues(),
        residue_set(&ctx, &printed),
    );
    let minus_four = Rat::from_integer(Int::from(-4));
    r.check(
        "printed extenders all have square -4",
        printed.iter().all(|k| ctx.square(&vec_int(k)) == minus_four),
    );
    r.check(
        "printed non-extender (0,1,1,1) fails divisibility",
        !report.divisible(&vec_int(&[0, 1, 1, 1])),
    );

    // The printed same-class pairs between box representatives.
    let pairs: [(&[i64], &[i64]); 7] = [
        (&[-2, 3, 1, -1], &[0, -3, 1, -1]),
        (&[0, 1, 3, -1], &[2, 1, -3, -1]),
        (&[4, -1, -1, -1], &[-4, 1, 1, 1]),
        (&[-2, 1, -1, 3], &[0, 1, -1, -3]),
        (&[0, 3, -1, 1], &[2, -3, -1, 1]),
        (&[-2, -1, 3, 1], &[0, -1, -3, 1]),
        (&[0, -1, 1, 3], &[2, -1, 1, -3]),
    ];
    r.check(
        "printed same-class pairs verified by witnesses",
        pairs
            .iter()
            .all(|(a, b)| ctx.same_class(&vec_int(a), &vec_int(b)).is_some()),
    );

    let table = d_table(&ctx, &DTableOptions::default())?;
    r.eq("d = 0 class count", table.zero_d_rows().len(), 15);
    check_owens_strle(&mut r, &ctx, &report, 9)?;
    Ok(r)
}

/// The (-4, -3, -2, -2) chain bounding -L(25,7): printed sharp paths,
/// lens identifications, the mn-family reduction, and ball extension.
pub fn lens257() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("lens-25-7-chain");
    let g = PlumbingGraph::chain(&[-4, -3, -2, -2]);
    let ctx = CharLattice::from_graph(&g)?;
    r.eq("determinant", ctx.det().clone(), Int::from(25));

    // The five printed sharp path-initial vectors with their exact paths.
    let paths: [(&[i64], &[i64], &[usize]); 5] = [
        (&[4, -1, 0, 0], &[-4, 1, 0, 0], &[0]),
        (&[2, -1, 2, 0], &[2, 1, 0, -2], &[2, 3]),
        (&[0, 1, 0, 2], &[2, -3, 0, 0], &[3, 2, 1]),
        (&[-2, 3, 0, 0], &[0, -1, 0, -2], &[1, 2, 3]),
        (&[-2, -1, 0, 2], &[-2, 1, -2, 0], &[3, 2]),
    ];
    let sharp: BTreeSet<Vec<Int>> = sharp_vectors(&ctx)?
        .into_iter()
        .flat_map(|c| c.vectors)
        .collect();
    for (start, terminal, moves) in paths {
        r.check(
            &format!("{:?} is sharp", start),
            sharp.contains(&vec_int(start)),
        );
        check_path(&mut r, &g, start, terminal, moves)?;
    }
    let classes: BTreeSet<Vec<Int>> = paths
        .iter()
        .map(|(s, _, _)| ctx.residue(&vec_int(s)))
        .collect();
    r.eq("five distinct sharp classes", classes.len(), 5);

    let boundary = chain_boundary(g.weights())?;
    r.eq(
        "chain boundary",
        boundary,
        LensSpace::with_sign(Int::from(25), Int::from(7), -1)?,
    );

    // mn family member (4, 1) reduces to exactly this chain.
    let mn = mn_family_graph(4, 1)?;
    let reduced = mn.blow_down(4)?;
    r.eq(
        "mn(4,1) blow-down",
        reduced.intersection_form(),
        g.intersection_form(),
    );

    let report = extension_classes(&ctx, &handle(&[-1, -1, 0, 0], -1))?;
    r.eq("handle kernel", report.kernel.clone(), vec_int(&[-2, -3, -2, -1, 5]));
    let table = d_table(&ctx, &DTableOptions::default())?;
    let d0: BTreeSet<Vec<Int>> = table.zero_d_rows().iter().map(|row| row.residue.clone()).collect();
    r.eq("extension set = d = 0 set", report.extending_residues(), d0);
    check_owens_strle(&mut r, &ctx, &report, 5)?;
    r.check("extenders form an arithmetic progression", cyclic_progression_check(&ctx, &report)?);
    Ok(r)
}

/// The 9_41 checkerboard form: printed inverse, the 13 d = 0 classes, the
/// printed subgroup walk with its symmetries, and the two gluings.
pub fn knot941() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("knot-9-41");
    let g = knot941_graph();
    let ctx = CharLattice::from_graph(&g)?;
    r.eq("determinant", ctx.det().clone(), Int::from(49));
    r.eq(
        "invariant factors",
        ctx.invariant_factors().to_vec(),
        vec_int(&[1, 1, 1, 1, 7, 7]),
    );
    r.eq(
        "printed inverse",
        ctx.form().invert()?,
        rat_matrix_scaled(
            &[
                &[6, 4, 4, 3, 2, 2],
                &[4, 6, 4, 2, 3, 2],
                &[4, 4, 6, 2, 2, 3],
                &[3, 2, 2, 5, 1, 1],
                &[2, 3, 2, 1, 5, 1],
                &[2, 2, 3, 1, 1, 5],
            ],
            7,
        ),
    );
    r.eq(
        "checkerboard family form n = 3 matches",
        family_form(3, false)?,
        ctx.form().clone(),
    );

    let table = d_table(&ctx, &DTableOptions::default())?;
    r.eq("d = 0 class count", table.zero_d_rows().len(), 13);

    // The four listed vectors restrict to one spin-c structure; the
    // equivalences use the sum of the -3 spheres and the all-ones class.
    let four: [&[i64]; 4] = [
        &[1, 1, 1, 0, 0, 0],
        &[-1, -1, -1, 0, 0, 0],
        &[1, 1, 1, -2, -2, -2],
        &[-1, -1, -1, 2, 2, 2],
    ];
    let classes: BTreeSet<Vec<Int>> = residue_set(&ctx, &four);
    r.eq("four listed vectors collapse to one class", classes.len(), 1);
    // The sum of the three -3 spheres effects (1,1,1,0,0,0) ~ (-1,-1,-1,2,2,2);
    // the all-ones class connects it to (1,1,1,-2,-2,-2).
    r.eq(
        "sum of -3 spheres as witness",
        ctx.same_class(&vec_int(four[0]), &vec_int(four[3])),
        Some(vec_int(&[1, 1, 1, 0, 0, 0])),
    );
    r.eq(
        "all-ones witness",
        ctx.same_class(&vec_int(four[0]), &vec_int(four[2])),
        Some(vec_int(&[1, 1, 1, 1, 1, 1])),
    );

    // The printed walk, in order; the greedy length-6 path conjugacy.
    let walk: [&[i64]; 7] = [
        &[1, 1, -1, 0, 2, 0],
        &[-1, 1, 1, 0, 0, 2],
        &[-1, 1, -1, 0, 2, 2],
        &[1, -1, 1, 2, 0, 0],
        &[1, -1, -1, 2, 2, 0],
        &[-1, -1, 1, 2, 0, 2],
        &[1, 1, 1, 0, 0, 0],
    ];
    let base = vec_int(&[1, 1, 1, -2, -2, -2]);
    let step = ctx.group_element(&vec_int(walk[0]), &base)?;
    let mut walk_ok = true;
    for (k, v) in walk.iter().enumerate() {
        let mut g_el = vec![Int::zero(); step.len()];
        for _ in 0..=k {
            g_el = g_el
                .iter()
                .zip(&step)
                .zip(ctx.moduli())
                .map(|((a, b), m)| {
                    if m.is_zero() {
                        a + b
                    } else {
                        num_integer::Integer::mod_floor(&(a + b), m)
                    }
                })
                .collect();
        }
        let expect = ctx.apply_group_element(&base, &g_el);
        walk_ok &= ctx.same_class(&expect, &vec_int(v)).is_some();
    }
    r.check("printed walk = k-fold multiples of the generator", walk_ok);

    // Conjugation reverses the walk; the rotation acts as multiplication
    // by two (first -> second -> fourth, third -> sixth -> fifth).
    let residues: Vec<Vec<Int>> = walk.iter().map(|v| ctx.residue(&vec_int(v))).collect();
    let conj_ok = (0..7).all(|k| {
        let conj = ctx.conjugate(&vec_int(walk[k]));
        // walk[k] has index k+1; conjugation sends index i to 7 - i.
        let target = if k == 6 { 6 } else { 5 - k };
        ctx.residue(&conj) == residues[target]
    });
    r.check("conjugation reverses the walk order", conj_ok);

    // The three-fold rotation of the plumbing acts on the order-7 subgroup as
    // an automorphism: one direction multiplies walk indices by two
    // (1 -> 2 -> 4, 3 -> 6 -> 5) and the opposite direction by four (the
    // inverse automorphism, since 2 * 4 = 8 = 1 mod 7).  Walk index 7 is the
    // identity of the subgroup.
    let acts_as = |perm: &[usize; 6], mult: usize| -> bool {
        (0..7).all(|k| {
            let v = vec_int(walk[k]);
            let rotated: Vec<Int> = (0..6).map(|i| v[perm[i]].clone()).collect();
            let target = (mult * (k + 1)) % 7;
            let idx = if target == 0 { 6 } else { target - 1 };
            ctx.residue(&rotated) == residues[idx]
        })
    };
    let fwd = [1usize, 2, 0, 4, 5, 3];
    let bwd = [2usize, 0, 1, 5, 3, 4];
    r.check(
        "one rotation direction multiplies walk indices by two",
        acts_as(&fwd, 2) || acts_as(&bwd, 2),
    );
    r.check(
        "opposite rotation direction multiplies walk indices by four",
        acts_as(&fwd, 4) || acts_as(&bwd, 4),
    );

    // Two gluings: each handle extends one of the two order-7 subgroups.
    let report1 = extension_classes(&ctx, &handle(&[-1, 0, 0, 0, 0, 1], -1))?;
    let report2 = extension_classes(&ctx, &handle(&[-1, 0, 0, 0, 1, 0], -1))?;
    let set1 = report1.extending_residues();
    let set2 = report2.extending_residues();
    let walk_set: BTreeSet<Vec<Int>> = residues.iter().cloned().collect();
    r.eq("first gluing extends the printed walk subgroup", set1.clone(), walk_set);
    r.eq("second gluing count", report2.extending_count(), 7);
    let shared: Vec<&Vec<Int>> = set1.intersection(&set2).collect();
    r.eq(
        "gluings share only the invariant class",
        shared,
        vec![&ctx.residue(&vec_int(&[1, 1, 1, 0, 0, 0]))],
    );
    check_owens_strle(&mut r, &ctx, &report1, 7)?;

    let orbits = extension_subgroup_orbits(&ctx, &table, Some(&[0, 2, 1, 3, 5, 4]))?;
    r.eq("two subgroup orbits", orbits.orbits.len(), 2);
    r.eq(
        "arm swap exchanges the orbits",
        orbits.symmetry_images.clone(),
        Some(vec![1, 0]),
    );
    Ok(r)
}

/// The mirror form [[-5,1,2],[1,-3,1],[2,1,-5]]: printed inverse, the
/// corrected two-column d = 0 table, and the column subgroups.
pub fn mirror941() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("knot-9-41-mirror");
    let form = IntMatrix::from_i64(&[&[-5, 1, 2], &[1, -3, 1], &[2, 1, -5]]);
    let ctx = CharLattice::new(form.clone())?;
    r.eq("determinant", ctx.det().clone(), Int::from(-49));
    r.eq(
        "printed inverse",
        form.invert()?,
        rat_matrix_scaled(&[&[2, 1, 1], &[1, 3, 1], &[1, 1, 2]], 7),
    );
    r.eq(
        "mirror family form n = 3 matches verbatim",
        family_form(3, true)?,
        form.clone(),
    );

    let table = d_table(&ctx, &DTableOptions::default())?;
    r.eq("d = 0 class count", table.zero_d_rows().len(), 13);

    let spin = vec_int(&[-1, 3, -1]);
    r.check(
        "spin pair (-1,3,-1) ~ (1,-3,1)",
        ctx.same_class(&spin, &vec_int(&[1, -3, 1])).is_some(),
    );
    r.check(
        "spin class is self-conjugate",
        ctx.residue(&ctx.conjugate(&spin)) == ctx.residue(&spin),
    );

    // The printed columns with the three glyph corrections applied.
    let col1: [&[i64]; 6] = [
        &[1, -1, -3],
        &[-3, -1, 3],
        &[-3, 1, -1],
        &[3, -1, 1],
        &[3, 1, -3],
        &[-1, 1, 3],
    ];
    let col2: [&[i64]; 6] = [
        &[-3, -1, 1],
        &[3, -1, -3],
        &[-1, 1, -3],
        &[1, -1, 3],
        &[-3, 1, 3],
        &[3, 1, -1],
    ];
    r.check(
        "columns are coordinate reversals of each other",
        col1.iter().zip(&col2).all(|(a, b)| {
            let mut rev = a.to_vec();
            rev.reverse();
            rev == **b
        }),
    );

    let d0: BTreeSet<Vec<Int>> = table.zero_d_rows().iter().map(|row| row.residue.clone()).collect();
    let set1 = residue_set(&ctx, &col1);
    let set2 = residue_set(&ctx, &col2);
    r.eq("column 1 has six distinct classes", set1.len(), 6);
    r.eq("column 2 has six distinct classes", set2.len(), 6);
    r.check("columns are disjoint", set1.is_disjoint(&set2));
    let mut union: BTreeSet<Vec<Int>> = set1.union(&set2).cloned().collect();
    union.insert(ctx.residue(&spin));
    r.eq("columns + spin = all 13 d = 0 classes", union, d0.clone());
    r.check(
        "columns are conjugation-closed",
        col1.iter().chain(&col2).all(|v| {
            let conj = ctx.conjugate(&vec_int(v));
            d0.contains(&ctx.residue(&conj))
        }),
    );

    // Column 1 in the order generated by adding 2(0,1,-2) to the spin class.
    let step = vec_int(&[0, 2, -4]);
    let mut current = spin.clone();
    let mut order_ok = true;
    for v in col1 {
        current = current.iter().zip(&step).map(|(a, b)| a + b).collect();
        order_ok &= ctx.same_class(&current, &vec_int(v)).is_some();
    }
    r.check("column 1 is the 2(0,1,-2)-walk in order", order_ok);

    // The coordinate swap exchanges the two subgroup orbits.
    let orbits = extension_subgroup_orbits(&ctx, &table, Some(&[2, 1, 0]))?;
    r.eq("two subgroup orbits", orbits.orbits.len(), 2);
    let orbit_sets: Vec<BTreeSet<Vec<Int>>> = orbits
        .orbits
        .iter()
        .map(|o| o.iter().cloned().collect())
        .collect();
    let with_spin = |mut s: BTreeSet<Vec<Int>>| {
        s.insert(ctx.residue(&spin));
        s
    };
    r.check(
        "orbits are the printed columns plus spin",
        orbit_sets.contains(&with_spin(set1)) && orbit_sets.contains(&with_spin(set2)),
    );
    r.eq(
        "swap symmetry exchanges the orbits",
        orbits.symmetry_images.clone(),
        Some(vec![1, 0]),
    );
    Ok(r)
}

/// Checkerboard family forms: determinants, printed matrices, spectra
/// congruences, and small-diagram determinants.
pub fn goeritz_families() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("goeritz-families");
    for n in 1..=6u32 {
        let expect = Int::from((1i64 << n) - 1).pow(2);
        for mirror in [false, true] {
            let d = family_diagram(n, mirror)?;
            r.eq(
                &format!("|det| family n={} mirror={}", n, mirror),
                det_check(&d)?,
                expect.clone(),
            );
        }
    }
    let trefoil =
        AlternatingDiagram::new(3, vec![(0, 1, -1), (1, 2, -1), (0, 2, -1)])?;
    r.eq(
        "trefoil form",
        goeritz_form(&trefoil, 2)?.form,
        IntMatrix::from_i64(&[&[-2, 1], &[1, -2]]),
    );
    r.eq("trefoil determinant", det_check(&trefoil)?, Int::from(3));
    r.eq(
        "6_1 family diagram determinant",
        det_check(&family_diagram(2, false)?)?,
        Int::from(9),
    );

    // Congruence evidence via stabilized d-spectra.
    let spectrum = |form: &IntMatrix| -> Result<Vec<Rat>> {
        let ctx = CharLattice::new(form.clone())?;
        Ok(d_table(&ctx, &DTableOptions::default())?.d_spectrum())
    };
    let mirror3 = family_form(3, true)?;
    let variant = goeritz_form(&family_diagram(3, true)?, 3)?.form;
    r.eq(
        "center-deleted variant",
        variant.clone(),
        IntMatrix::from_i64(&[&[-5, 2, 2], &[2, -5, 2], &[2, 2, -5]]),
    );
    r.eq(
        "basepoint-independent d-spectrum",
        spectrum(&mirror3)?,
        spectrum(&variant)?,
    );
    r.eq(
        "white n=2 spectrum matches (-2,-2,-2,-3) chain",
        spectrum(&family_form(2, false)?)?,
        spectrum(&PlumbingGraph::chain(&[-2, -2, -2, -3]).intersection_form())?,
    );
    r.eq(
        "mirror n=2 spectrum matches (-5,-2) chain",
        spectrum(&family_form(2, true)?)?,
        spectrum(&PlumbingGraph::chain(&[-5, -2]).intersection_form())?,
    );
    Ok(r)
}

/// The (m, n) star family: verbatim figure, blow-down reduction, and the
/// negative definite members.
pub fn mn_family() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("mn-family");
    let g = mn_family_graph(4, 1)?;
    r.eq(
        "mn(4,1) verbatim weights",
        g.weights().to_vec(),
        vec_int(&[-4, -3, -1, -2, 1]),
    );
    r.eq(
        "mn(4,1) reduces to the -L(25,7) chain",
        g.blow_down(4)?.intersection_form(),
        PlumbingGraph::chain(&[-4, -3, -2, -2]).intersection_form(),
    );
    r.eq(
        "|det| preserved by blow-down",
        g.intersection_form().det()?.abs(),
        Int::from(25),
    );

    let g = mn_family_graph(5, 2)?;
    r.eq("mn(5,2) determinant", g.intersection_form().det()?, Int::from(-49));
    let reduced = g.blow_down(5)?;
    r.check(
        "mn(5,2) reduced form negative definite",
        reduced.intersection_form().is_negative_definite()?,
    );
    r.eq(
        "mn(5,2) reduced |det|",
        reduced.intersection_form().det()?.abs(),
        Int::from(49),
    );

    for n in 1..=4i64 {
        let g = mn_family_graph(n + 3, n)?;
        let v = g.vertex_count() - 1;
        let reduced = g.blow_down(v)?;
        r.check(
            &format!("m = n + 3 member (n = {}) reduces negative definite", n),
            reduced.intersection_form().is_negative_definite()?,
        );
    }
    Ok(r)
}

/// Blow-up shift ledger on a single (-1)-sphere.
pub fn blowup() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("blowup-ledger");
    let ledger = blowup_ledger(5)?;
    for row in &ledger {
        let n = row.n as i64;
        r.eq(
            &format!("n = {}: shift", n),
            row.shift.clone(),
            Int::from(-(n * n + n)),
        );
        r.eq(
            &format!("n = {}: U-power", n),
            row.u_power.clone(),
            Int::from(n * (n + 1) / 2),
        );
    }
    Ok(r)
}

fn ambient(chi: i64, sigma: i64, c1sq: i64, pairs: &[&[i64]]) -> AmbientData {
    AmbientData {
        chi: Int::from(chi),
        sigma: Int::from(sigma),
        classes: pairs
            .iter()
            .enumerate()
            .map(|(i, p)| AmbientClass {
                name: format!("K{}", i),
                c1sq: Int::from(c1sq),
                pairings: vec_int(p),
            })
            .collect(),
    }
}

fn lift(
    ctx: &CharLattice,
    data: &AmbientData,
    spec: &HandleSpec,
) -> Result<BlowdownReport> {
    let ball = extension_classes(ctx, spec)?;
    lift_basic_classes(ctx, data, &ball)
}

/// E(2) with the (2,1) configuration: the unique basic class K = 0 is not
/// sharp, so nothing descends.
pub fn ambient_e2() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("ambient-e2-c21");
    let g = park_chain(&Int::from(2), &Int::from(1))?;
    let ctx = CharLattice::from_graph(&g)?;
    let data = ambient(24, -16, 0, &[&[0]]);
    let report = lift(&ctx, &data, &handle(&[-2], -1))?;
    let row = &report.classes[0];
    r.check("K = 0 restriction is characteristic", row.glue_characteristic);
    r.check("K = 0 is not sharp", !row.sharp);
    r.check("K = 0 does not survive", !row.survives);
    r.eq("no basic classes descend", report.basic_class_count, 0);
    r.eq("chi after", report.chi_after.clone(), Int::from(23));
    r.eq("sigma after", report.sigma_after.clone(), Int::from(-15));
    Ok(r)
}

/// E(3) # 2 CP-bar-2 over the (-3,-5,-2) configuration: of the eight basic
/// classes exactly (1,3,0) and its conjugate survive.
pub fn ambient_e3_c53() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("ambient-e3-c53");
    let g = PlumbingGraph::chain(&[-3, -5, -2]);
    let ctx = CharLattice::from_graph(&g)?;
    let pairs: [&[i64]; 8] = [
        &[1, 3, 0],
        &[1, 1, -2],
        &[1, -1, 2],
        &[1, -3, 0],
        &[-1, -3, 0],
        &[-1, -1, 2],
        &[-1, 1, -2],
        &[-1, 3, 0],
    ];
    let data = ambient(38, -26, -2, &pairs);
    let report = lift(&ctx, &data, &handle(&[1, 0, 1], -1))?;
    let mut survivors: Vec<Vec<Int>> = report
        .classes
        .iter()
        .filter(|c| c.survives)
        .map(|c| c.restriction.clone())
        .collect();
    survivors.sort();
    r.eq(
        "survivors are (1,3,0) and conjugate",
        survivors,
        vec![vec_int(&[-1, -3, 0]), vec_int(&[1, 3, 0])],
    );
    r.eq("basic classes after", report.basic_class_count, 2);
    r.check(
        "surviving classes preserve D",
        report
            .classes
            .iter()
            .filter(|c| c.survives)
            .all(|c| c.d_before == c.d_after),
    );
    Ok(r)
}

/// E(4) # 3 CP-bar-2 over the (-4,-3,-2,-2) chain: six sharp survivors
/// merging to the two printed path triples.
pub fn ambient_e4_l257() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("ambient-e4-l257");
    let g = PlumbingGraph::chain(&[-4, -3, -2, -2]);
    let ctx = CharLattice::from_graph(&g)?;
    let mut pairs: Vec<Vec<i64>> = Vec::new();
    for k in [-2i64, 0, 2] {
        for bits in 0..8u32 {
            let a: Vec<i64> = (0..3)
                .map(|b| if bits >> b & 1 == 0 { 1 } else { -1 })
                .collect();
            pairs.push(vec![k, -a[0], a[0] - a[1], a[1] - a[2]]);
        }
    }
    let pair_refs: Vec<&[i64]> = pairs.iter().map(|p| &p[..]).collect();
    let data = ambient(51, -35, -3, &pair_refs);
    let report = lift(&ctx, &data, &handle(&[-1, -1, 0, 0], -1))?;
    r.eq("ambient class count", report.classes.len(), 24);
    let survivors: Vec<&crate::blowdown::ClassLift> =
        report.classes.iter().filter(|c| c.survives).collect();
    r.eq("sharp surviving restrictions", survivors.len(), 6);
    r.eq("merged basic classes", report.basic_class_count, 2);
    let mut got: Vec<Vec<Int>> = survivors.iter().map(|c| c.restriction.clone()).collect();
    got.sort();
    let expect: Vec<Vec<Int>> = [
        [-2i64, -1, 0, 2],
        [-2, -1, 2, -2],
        [-2, 1, -2, 0],
        [2, -1, 2, 0],
        [2, 1, -2, 2],
        [2, 1, 0, -2],
    ]
    .iter()
    .map(|v| vec_int(&v[..]))
    .collect();
    r.eq("survivors are the printed path triples", got, expect);
    r.eq("chi after", report.chi_after.clone(), Int::from(47));
    r.eq("sigma after", report.sigma_after.clone(), Int::from(-31));
    let zero = Rat::from_integer(Int::zero());
    r.check(
        "surviving classes have D = 0 before and after",
        survivors.iter().all(|c| c.d_before == zero && c.d_after == zero),
    );
    Ok(r)
}

/// E(3) # 4 CP-bar-2 over W(2,2,2): four survivors, two of which restrict
/// identically, leaving three basic classes per fiber class.
pub fn ambient_e3_wahl() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("ambient-e3-wahl222");
    let ctx = CharLattice::from_graph(&wahl_graph(2, 2, 2)?)?;
    let pairs: [&[i64]; 8] = [
        &[2, 1, 1, 1],
        &[-2, -1, -1, -1],
        &[0, 1, 1, 1],
        &[0, -1, -1, -1],
        &[-2, 1, 1, 1],
        &[2, -1, -1, -1],
        &[-4, 1, 1, 1],
        &[4, -1, -1, -1],
    ];
    let data = ambient(40, -28, -4, &pairs);
    let report = lift(&ctx, &data, &handle(&[1, -1, 1, 0], -1))?;
    let survivors: Vec<&crate::blowdown::ClassLift> =
        report.classes.iter().filter(|c| c.survives).collect();
    r.eq("surviving restrictions", survivors.len(), 4);
    r.eq("merged basic classes", report.basic_class_count, 3);
    let merged: Vec<&crate::blowdown::ClassLift> = report
        .classes
        .iter()
        .filter(|c| c.merged_into.is_some())
        .collect();
    r.check(
        "(4,-1,-1,-1) merges with (-4,1,1,1)",
        merged.len() == 1
            && merged[0].restriction == vec_int(&[4, -1, -1, -1])
            && merged[0].merged_into == Some(6),
    );
    r.check(
        "(-4,1,1,1) survivor is not tautly embedded",
        report
            .classes
            .iter()
            .any(|c| c.restriction == vec_int(&[-4, 1, 1, 1]) && c.survives && !c.taut),
    );
    r.check(
        "(0,1,1,1) does not extend",
        report
            .classes
            .iter()
            .any(|c| c.restriction == vec_int(&[0, 1, 1, 1]) && !c.extends),
    );
    Ok(r)
}

/// Blow-down chains C(p, q): the printed (5,1) weights, the figure-chain
/// reversal identity, determinants, and the prose (p,1) handles.
pub fn park_chains() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("park-chains");
    let park = |p: i64, q: i64| park_chain(&Int::from(p), &Int::from(q));
    r.eq(
        "park(5,1) printed weights",
        park(5, 1)?.weights().to_vec(),
        vec_int(&[-7, -2, -2, -2]),
    );
    let mut rev = park(5, 3)?.weights().to_vec();
    rev.reverse();
    r.eq(
        "figure chain = reversed park(5,3) = park(5,2)",
        rev,
        park(5, 2)?.weights().to_vec(),
    );
    r.eq(
        "park(5,2) weights",
        park(5, 2)?.weights().to_vec(),
        vec_int(&[-3, -5, -2]),
    );

    for (p, q) in [(2i64, 1i64), (3, 2), (4, 3), (5, 2), (7, 3), (9, 5)] {
        r.eq(
            &format!("park({},{}) determinant is p^2", p, q),
            park(p, q)?.intersection_form().det()?.abs(),
            Int::from(p * p),
        );
    }

    // The prose (p,1) handle: meets the long sphere twice, the next once.
    for p in 2usize..=6 {
        let ctx = CharLattice::from_graph(&park(p as i64, 1)?)?;
        let mut pairings = vec![0i64; p - 1];
        pairings[0] = -2;
        if p >= 3 {
            pairings[1] = 1;
        }
        let report = extension_classes(&ctx, &handle(&pairings, -1))?;
        r.eq(
            &format!("C({},1) extending classes", p),
            report.extending_count(),
            p,
        );
        let table = d_table(&ctx, &DTableOptions::default())?;
        let cert = owens_strle_check_with(&report, &table);
        r.check(&format!("C({},1) Owens-Strle holds", p), cert.holds);
        if p == 2 {
            r.check(
                "C(2,1) divisibility and parity verdicts differ",
                report.parity_disagrees,
            );
        }
    }
    Ok(r)
}

/// The lens-space identities quoted in the examples.
pub fn lens_identities() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("lens-identities");
    let l = |p: i64, q: i64| LensSpace::new(Int::from(p), Int::from(q));
    let nl = |p: i64, q: i64| LensSpace::with_sign(Int::from(p), Int::from(q), -1);
    let chain = [nl(25, 4)?, l(25, 21)?, nl(25, 19)?, l(25, 6)?];
    r.check(
        "-L(25,4) = L(25,21) = -L(25,19) = L(25,6)",
        chain.iter().all(|a| chain.iter().all(|b| lens_equiv(a, b))),
    );
    r.check("L(9,2) = L(9,5)", lens_equiv(&l(9, 2)?, &l(9, 5)?));
    r.check("L(9,7) = L(9,4)", lens_equiv(&l(9, 7)?, &l(9, 4)?));
    r.check(
        "L(25,7) and L(25,14) are distinct",
        !lens_equiv_unoriented(&l(25, 7)?, &l(25, 14)?),
    );
    r.check(
        "(5,2)/(5,3) dual pair identity",
        park_dual(&Int::from(5), &Int::from(2), &Int::from(3)),
    );
    r.eq(
        "chain (-5,-2,-2,-2,-2,-2) bounds -L(25,6)",
        chain_boundary(&vec_int(&[-5, -2, -2, -2, -2, -2]))?,
        nl(25, 6)?,
    );
    for (p, q) in [(2i64, 1i64), (3, 1), (4, 3), (5, 2), (7, 5), (9, 7)] {
        let g = park_chain(&Int::from(p), &Int::from(q))?;
        let boundary = chain_boundary(g.weights())?;
        let target = l(p * p, p * q - 1)?;
        r.check(
            &format!("park({},{}) boundary is L({},{}) up to orientation", p, q, p * p, p * q - 1),
            lens_equiv_unoriented(&boundary, &target),
        );
    }
    Ok(r)
}

/// Star plumbings: ray expansion fixtures and the negative-definiteness
/// guarantee b <= -(ray count).
pub fn seifert() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("seifert-stars");
    let ray = |a: i64, b: i64| (Int::from(a), Int::from(b));
    let star = |b: i64, rays: &[(Int, Int)]| {
        seifert_star(&Int::from(b), rays, RayConvention::AlphaOverBeta)
    };

    let g = star(-3, &[ray(3, 1), ray(3, 1), ray(3, 1)])?;
    r.eq(
        "b=-3 with three 1/3 rays: center and leaves",
        g.weights().to_vec(),
        vec_int(&[-3, -3, -3, -3]),
    );
    r.check(
        "b <= -n guarantee: negative definite",
        g.intersection_form().is_negative_definite()?,
    );

    let g = star(-2, &[ray(2, 1)])?;
    r.eq(
        "b=-2 with ray 1/2 is the (-2,-2) chain",
        g.intersection_form(),
        PlumbingGraph::chain(&[-2, -2]).intersection_form(),
    );

    let g = star(-1, &[ray(2, 1), ray(3, 1), ray(7, 1)])?;
    r.eq("(-1; 2, 3, 7) star determinant", g.intersection_form().det()?, Int::from(1));
    r.check(
        "(-1; 2, 3, 7) star negative definite",
        g.intersection_form().is_negative_definite()?,
    );
    let pairs = condition2_path_pairs(&g)?;
    r.eq("single class", pairs.len(), 1);
    r.eq(
        "two condition-2 path pairs",
        *pairs.values().next().unwrap(),
        2,
    );
    Ok(r)
}

/// The W(2,2,3) plumbing printed alongside the main example.
pub fn wahl223() -> Result<FixtureReport> {
    let mut r = FixtureReport::new("wahl-2-2-3");
    let g = wahl_graph(2, 2, 3)?;
    r.eq("vertex count", g.vertex_count(), 5);
    let form = g.intersection_form();
    r.eq("determinant -13^2", form.det()?, Int::from(-169));
    r.check("negative definite", form.is_negative_definite()?);
    r.check("no bad vertices", g.bad_vertices().is_empty());
    Ok(r)
}

/// Every fixture report, in presentation order.
pub fn all() -> Result<Vec<FixtureReport>> {
    Ok(vec![
        c53()?,
        wahl222()?,
        lens257()?,
        knot941()?,
        mirror941()?,
        goeritz_families()?,
        mn_family()?,
        blowup()?,
        ambient_e2()?,
        ambient_e3_c53()?,
        ambient_e4_l257()?,
        ambient_e3_wahl()?,
        park_chains()?,
        lens_identities()?,
        seifert()?,
        wahl223()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        let reports = all().unwrap();
        assert_eq!(reports.len(), 16);
        for report in &reports {
            let failures: Vec<String> = report
                .failed_checks()
                .iter()
                .map(|c| format!("  [{}] {}: {}", report.name, c.label, c.detail))
                .collect();
            assert!(
                failures.is_empty(),
                "fixture {} failed:\n{}",
                report.name,
                failures.join("\n")
            );
        }
    }
}
