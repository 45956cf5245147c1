//! End-to-end verification of the two square formulas against each other.

pub mod identities;
pub mod report;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::burnside::{khovanov_functor, CubeFunctor};
use crate::f2algebra::{cochain_complex, Cochain, Coboundary, F2Complex};
use crate::linkio::LinkDiagram;
use crate::lssq::{boundary_matching, chord_presentation, sq2_ls_raw, MatchingVariant};
use crate::moransq::{sq2_moran_raw, SqEvalContext, Term3};
use crate::semisimp::{lambda_of_unchecked, SemiSimplicialObject, SpanOrder};

use identities::{Eval, Local, IDENTITIES};
pub use report::{
    CheckResult, ClassResult, Counterexample, SqMatrix, SuiteReport, VerificationReport, REPORT_SCHEMA,
};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// seeded reorderings of the base span order, on top of the canonical one
    pub reorders: usize,
    pub matchings: Vec<MatchingVariant>,
    /// random kernel elements per (n, j) block
    pub random_samples: usize,
    pub identities: bool,
    pub term3: Term3,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            reorders: 3,
            matchings: vec![MatchingVariant::Consecutive, MatchingVariant::Nested],
            random_samples: 32,
            identities: true,
            term3: Term3::Honest,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub n: i32,
    pub j: i32,
    pub label: String,
    pub alpha: Cochain,
}

fn block_rng(seed: u64, n: i32, j: i32) -> ChaCha8Rng {
    let mix = seed ^ ((n as i64 as u64) << 32) ^ (j as i64 as u64 & 0xffff_ffff);
    ChaCha8Rng::seed_from_u64(mix.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Homology representatives plus seeded random cocycles for every block.
pub fn samples(c: &F2Complex, random: usize, seed: u64) -> Vec<Sample> {
    let mut out = vec![];
    for (n, j) in c.blocks().collect::<Vec<_>>() {
        for (k, a) in c.homology_basis(n, j).1.into_iter().enumerate() {
            out.push(Sample { n, j, label: format!("rep {}", k), alpha: a });
        }
        if c.kernel_basis(n, j).is_empty() {
            continue;
        }
        let mut rng = block_rng(seed, n, j);
        for k in 0..random {
            let alpha = c.random_cocycle(n, j, &mut rng);
            out.push(Sample { n, j, label: format!("random {}", k), alpha });
        }
    }
    out
}

pub fn orders(x: &SemiSimplicialObject, opts: &VerifyOptions) -> Vec<SpanOrder> {
    let mut v = vec![SpanOrder::canonical(x)];
    v.extend((0..opts.reorders as u64).map(|i| SpanOrder::seeded(x, opts.seed.wrapping_add(i))));
    v
}

fn cex(s: &Sample, z: Option<u32>, detail: impl Into<String>) -> Counterexample {
    Counterexample { n: s.n, j: s.j, sample: s.label.clone(), z, detail: detail.into() }
}

fn is_cob(c: &F2Complex, f: &Cochain) -> bool {
    matches!(c.is_coboundary(f), Coboundary::Witness(_))
}

/// Morán and LS squares of α under one order and matching.
fn both_squares(
    c: &F2Complex,
    ctx: &SqEvalContext,
    mv: MatchingVariant,
    term3: Term3,
) -> Result<(Cochain, Cochain), String> {
    let mo = sq2_moran_raw(ctx, term3);
    let m = boundary_matching(ctx, mv).map_err(|e| e.to_string())?;
    let ls = sq2_ls_raw(ctx, &m).map_err(|e| e.to_string())?;
    if !c.delta(&mo).is_zero() {
        return Err("Morán square is not a cocycle".into());
    }
    if !c.delta(&ls).is_zero() {
        return Err("LS square is not a cocycle".into());
    }
    Ok((mo, ls))
}

/// For every homology representative under every order and matching, certify sq2_moran + sq2_ls = δω.
pub fn theorem_classes(c: &F2Complex, opts: &VerifyOptions) -> Vec<ClassResult> {
    let x = c.object();
    let ords = orders(x, opts);
    let mut jobs = vec![];
    for (oi, o) in ords.iter().enumerate() {
        for &mv in &opts.matchings {
            for (n, j) in c.blocks().collect::<Vec<_>>() {
                for (k, a) in c.homology_basis(n, j).1.into_iter().enumerate() {
                    jobs.push((oi, o, mv, n, j, k, a));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(oi, o, mv, n, j, k, a)| {
            let mut r = ClassResult {
                n,
                i: n + 1 - c.n_minus,
                j,
                class: k,
                order_seed: if oi == 0 { None } else { o.seed },
                matching: mv.name().to_string(),
                moran_support: 0,
                ls_support: 0,
                witness_found: false,
                witness: None,
                error: None,
            };
            let ctx = match SqEvalContext::new(x, o, &a) {
                Ok(ctx) => ctx,
                Err(e) => {
                    r.error = Some(e.to_string());
                    return r;
                }
            };
            match both_squares(c, &ctx, mv, opts.term3) {
                Err(e) => r.error = Some(e),
                Ok((mo, ls)) => {
                    r.moran_support = mo.support().len();
                    r.ls_support = ls.support().len();
                    let diff = mo.add(&ls);
                    if let Coboundary::Witness(w) = c.is_coboundary(&diff) {
                        if c.delta(&w) == diff {
                            r.witness_found = true;
                            r.witness = Some(w.support());
                        } else {
                            r.error = Some("witness does not bound the difference".into());
                        }
                    }
                }
            }
            r
        })
        .collect()
}

/// Runs every identity on every sample under the canonical order and consecutive matching.
pub fn identity_suite(c: &F2Complex, samples: &[Sample]) -> Vec<CheckResult> {
    let x = c.object();
    let order = SpanOrder::canonical(x);
    let per: Vec<Vec<CheckResult>> = samples
        .par_iter()
        .map(|s| {
            let mut res: Vec<CheckResult> = IDENTITIES
                .iter()
                .map(|id| {
                    let kind = match id.eval {
                        _ if id.diagnostic => "diagnostic",
                        Eval::Exact(_) => "exact",
                        Eval::Cochain(_) => "mod-coboundary",
                    };
                    CheckResult::new(id.name, kind)
                })
                .collect();
            let ctx = match SqEvalContext::new(x, &order, &s.alpha) {
                Ok(c) => c,
                Err(e) => {
                    for r in &mut res {
                        r.record(false, || cex(s, None, e.to_string()));
                    }
                    return res;
                }
            };
            let m = boundary_matching(&ctx, MatchingVariant::Consecutive).expect("cocycle input");
            let mut cochains: Vec<Cochain> = IDENTITIES.iter().map(|_| Cochain::zero(x, s.n + 2)).collect();
            for z in 0..ctx.targets() {
                let pres = match chord_presentation(&ctx, z) {
                    Ok(p) => p,
                    Err(e) => {
                        res[0].record(false, || cex(s, Some(z), e.to_string()));
                        continue;
                    }
                };
                if pres.view.is_trivial() {
                    continue;
                }
                let local = Local::new(&ctx, &pres.view, &pres, &m);
                for (i, id) in IDENTITIES.iter().enumerate() {
                    match id.eval {
                        Eval::Exact(f) => {
                            let pairs = f(&local);
                            let bad = pairs.iter().find(|(l, r)| (l - r).rem_euclid(2) != 0).copied();
                            res[i].record(bad.is_none(), || {
                                let (l, r) = bad.unwrap();
                                cex(s, Some(z), format!("lhs {} rhs {}", l, r))
                            });
                        }
                        Eval::Cochain(f) => {
                            if f(&local).rem_euclid(2) == 1 {
                                cochains[i].bits.flip(z as usize);
                            }
                        }
                    }
                }
            }
            for (i, id) in IDENTITIES.iter().enumerate() {
                if let Eval::Cochain(_) = id.eval {
                    let ok = is_cob(c, &cochains[i]);
                    res[i].record(ok, || cex(s, None, "lhs + rhs is not a coboundary"));
                }
            }
            res
        })
        .collect();
    merge_all(per)
}

fn merge_all(per: Vec<Vec<CheckResult>>) -> Vec<CheckResult> {
    let mut it = per.into_iter();
    let Some(mut acc) = it.next() else {
        return vec![];
    };
    for v in it {
        for (a, b) in acc.iter_mut().zip(v) {
            a.merge(b);
        }
    }
    acc
}

/// The homotopy and the map it contracts, applied to one cochain.
pub fn homotopy_h(x: &SemiSimplicialObject, w: &Cochain) -> Cochain {
    let mut out = Cochain::zero(x, w.n + 1);
    if !x.has_faces(w.n + 1) {
        return out;
    }
    for a in 0..=(w.n + 1) as usize {
        if ((a + 1) * a / 2) % 2 == 0 {
            continue;
        }
        for e in &x.face(w.n + 1, a).elts {
            if w.contains(e.tgt) {
                out.bits.flip(e.src as usize);
            }
        }
    }
    out
}

/// ⟨Lω, z⟩ = Σ_{a<b} b·m_ab(z, ω)
pub fn l_map(x: &SemiSimplicialObject, w: &Cochain) -> Cochain {
    let n2 = w.n + 2;
    let mut out = Cochain::zero(x, n2);
    if !x.has_faces(n2) {
        return out;
    }
    for a in 0..=n2 as usize {
        let fa = x.face(n2, a);
        for e in &fa.elts {
            for f in a..=(n2 - 1) as usize {
                if (f + 1) % 2 == 0 {
                    continue;
                }
                let ff = x.face(n2 - 1, f);
                for p in ff.from_src(e.tgt) {
                    if w.contains(ff.elts[p as usize].tgt) {
                        out.bits.flip(e.src as usize);
                    }
                }
            }
        }
    }
    out
}

/// δH + Hδ = L on every basis cochain.
pub fn nullhomotopy_check(c: &F2Complex) -> CheckResult {
    let x = c.object();
    let mut r = CheckResult::new("nullhomotopy δH+Hδ=L", "exact");
    for n in -1..=x.top() {
        let res: Vec<(u32, bool)> = (0..x.level_len(n) as u32)
            .into_par_iter()
            .map(|g| {
                let e = Cochain::from_support(x, n, [g]);
                let lhs = c.delta(&homotopy_h(x, &e)).add(&homotopy_h(x, &c.delta(&e)));
                (g, lhs == l_map(x, &e))
            })
            .collect();
        for (g, ok) in res {
            r.record(ok, || Counterexample {
                n,
                j: x.level(n).map_or(0, |l| l.gens[g as usize].q),
                sample: format!("basis {}", g),
                z: None,
                detail: "δH + Hδ differs from L".into(),
            });
        }
    }
    r
}

/// Cocycle closure, grading, class and order invariance of both squares, and Bockstein consistency.
pub fn property_checks(c: &F2Complex, samples: &[Sample], opts: &VerifyOptions) -> Vec<CheckResult> {
    let x = c.object();
    let ords = orders(x, opts);
    let per: Vec<Vec<CheckResult>> = samples
        .par_iter()
        .map(|s| {
            let mut closure = CheckResult::new("cocycle closure", "property");
            let mut grading = CheckResult::new("grading", "property");
            let mut class_inv = CheckResult::new("class invariance", "property");
            let mut order_inv = CheckResult::new("order invariance", "property");
            let mut bock = CheckResult::new("bockstein", "property");
            let mut rng = block_rng(opts.seed ^ 0x5eed, s.n, s.j);
            let canon = &ords[0];
            let run = |a: &Cochain, o: &SpanOrder| -> Result<(Cochain, Cochain), String> {
                let ctx = SqEvalContext::new(x, o, a).map_err(|e| e.to_string())?;
                let mo = sq2_moran_raw(&ctx, opts.term3);
                let m = boundary_matching(&ctx, MatchingVariant::Consecutive).map_err(|e| e.to_string())?;
                let ls = sq2_ls_raw(&ctx, &m).map_err(|e| e.to_string())?;
                Ok((mo, ls))
            };
            match run(&s.alpha, canon) {
                Err(e) => closure.record(false, || cex(s, None, e)),
                Ok((mo, ls)) => {
                    for (name, out) in [("Morán", &mo), ("LS", &ls)] {
                        closure.record(c.delta(out).is_zero(), || cex(s, None, format!("{} output", name)));
                        let g = out.gradings(x);
                        grading.record(out.n == s.n + 2 && g.iter().all(|&q| q == s.j), || {
                            cex(s, None, format!("{} output gradings {:?}", name, g))
                        });
                    }
                    // α + δω for random ω in the same quantum grading
                    let prev = x.level(s.n - 1);
                    let w = Cochain::from_support(
                        x,
                        s.n - 1,
                        prev.map_or(vec![], |l| {
                            (0..l.len() as u32).filter(|&g| l.gens[g as usize].q == s.j && rng.gen()).collect()
                        }),
                    );
                    match run(&s.alpha.add(&c.delta(&w)), canon) {
                        Err(e) => class_inv.record(false, || cex(s, None, e)),
                        Ok((mo2, ls2)) => {
                            class_inv.record(is_cob(c, &mo.add(&mo2)), || cex(s, None, "Morán"));
                            class_inv.record(is_cob(c, &ls.add(&ls2)), || cex(s, None, "LS"));
                        }
                    }
                    if s.label.starts_with("rep") {
                        for o in &ords[1..] {
                            match run(&s.alpha, o) {
                                Err(e) => order_inv.record(false, || cex(s, None, e)),
                                Ok((mo2, ls2)) => {
                                    order_inv.record(is_cob(c, &mo.add(&mo2)), || {
                                        cex(s, None, format!("Morán, seed {:?}", o.seed))
                                    });
                                    order_inv.record(is_cob(c, &ls.add(&ls2)), || {
                                        cex(s, None, format!("LS, seed {:?}", o.seed))
                                    });
                                }
                            }
                        }
                    }
                }
            }
            // β² = 0 on classes, and β does not depend on the integral lift
            match c.bockstein(&s.alpha) {
                Err(e) => bock.record(false, || cex(s, None, e.to_string())),
                Ok(b) => {
                    bock.record(c.delta(&b).is_zero(), || cex(s, None, "β(α) is not a cocycle"));
                    match c.bockstein(&b) {
                        Ok(bb) => bock.record(is_cob(c, &bb), || cex(s, None, "β²(α) is not a coboundary")),
                        Err(e) => bock.record(false, || cex(s, None, e.to_string())),
                    }
                    let lift: Vec<i64> = (0..s.alpha.bits.len())
                        .map(|g| s.alpha.bits.get(g) as i64 + 2 * rng.gen_range(-2i64..=2))
                        .collect();
                    match c.bockstein_of_lift(s.n, &lift) {
                        Ok(b2) => bock.record(is_cob(c, &b.add(&b2)), || cex(s, None, "lift dependence")),
                        Err(e) => bock.record(false, || cex(s, None, e.to_string())),
                    }
                }
            }
            vec![closure, grading, class_inv, order_inv, bock]
        })
        .collect();
    merge_all(per)
}

/// Matrices of sq¹ and of both sq² formulas on the homology basis.
pub fn sq_action_table(c: &F2Complex, ops: &[&str], methods: &[&str]) -> Result<Vec<SqMatrix>, String> {
    let x = c.object();
    let order = SpanOrder::canonical(x);
    let mut out = vec![];
    for (n, j) in c.blocks().collect::<Vec<_>>() {
        let (dim, reps) = c.homology_basis(n, j);
        if dim == 0 {
            continue;
        }
        let mut cols: Vec<(&str, &str, i32, Vec<Cochain>)> = vec![];
        if ops.contains(&"sq1") {
            let col = reps.iter().map(|a| c.bockstein(a)).collect::<Result<_, _>>();
            cols.push(("sq1", "bockstein", n + 1, col.map_err(|e| e.to_string())?));
        }
        if ops.contains(&"sq2") {
            for &meth in methods {
                let col = reps
                    .iter()
                    .map(|a| {
                        let ctx = SqEvalContext::new(x, &order, a)?;
                        match meth {
                            "moran" => Ok(sq2_moran_raw(&ctx, Term3::Honest)),
                            _ => sq2_ls_raw(&ctx, &boundary_matching(&ctx, MatchingVariant::Consecutive)?),
                        }
                    })
                    .collect::<Result<Vec<_>, crate::moransq::SqError>>();
                cols.push(("sq2", meth, n + 2, col.map_err(|e| e.to_string())?));
            }
        }
        for (op, method, tn, col) in cols {
            let tdim = c.homology_basis(tn, j).0;
            if tdim == 0 {
                continue;
            }
            let coords = col
                .iter()
                .map(|f| c.coordinates(f, j))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("{} [{}] at n={} j={}: {}", op, method, n, j, e))?;
            let matrix = (0..tdim).map(|r| coords.iter().map(|v| v[r] as u8).collect()).collect();
            out.push(SqMatrix {
                op: op.to_string(),
                method: method.to_string(),
                n,
                i: n + 1 - c.n_minus,
                j,
                matrix,
            });
        }
    }
    Ok(out)
}

pub fn verify_functor(name: &str, d: &LinkDiagram, f: CubeFunctor, opts: &VerifyOptions) -> VerificationReport {
    let coherence = f.check_coherence();
    let x = lambda_of_unchecked(f);
    let c = cochain_complex(&x, d.n_minus);
    let mut coh = CheckResult::new("functor coherence", "property");
    coh.record(coherence.is_empty(), || Counterexample {
        n: 0,
        j: 0,
        sample: "functor".into(),
        z: None,
        detail: format!("{} face and {} hexagon failures", coherence.faces.len(), coherence.hexagons.len()),
    });
    let ss = samples(&c, opts.random_samples, opts.seed);
    let classes = theorem_classes(&c, opts);
    let mut identities = vec![];
    if opts.identities {
        identities = identity_suite(&c, &ss);
        identities.push(nullhomotopy_check(&c));
    }
    let mut checks = vec![coh];
    checks.extend(property_checks(&c, &ss, opts));
    let mut r = VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        fixture: name.to_string(),
        crossings: d.crossing_count(),
        n_plus: d.n_plus,
        n_minus: d.n_minus,
        homology: c.homology_table(),
        classes,
        identities,
        checks,
        passed: false,
    };
    r.compute_passed();
    r
}

pub fn verify_theorem(name: &str, d: &LinkDiagram, opts: &VerifyOptions) -> VerificationReport {
    let t = std::time::Instant::now();
    let r = verify_functor(name, d, khovanov_functor(d), opts);
    log::info!("{}: {} class checks in {:.2?}, passed {}", name, r.classes.len(), t.elapsed(), r.passed);
    r
}

pub fn verify_suite(fixtures: &[(String, LinkDiagram)], opts: &VerifyOptions) -> SuiteReport {
    let fixtures: Vec<VerificationReport> =
        fixtures.iter().map(|(n, d)| verify_theorem(n, d, opts)).collect();
    let passed = fixtures.iter().all(|r| r.passed);
    SuiteReport { schema: REPORT_SCHEMA.to_string(), fixtures, passed }
}
