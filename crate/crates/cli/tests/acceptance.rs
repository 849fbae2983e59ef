//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p vtoric-cli --test acceptance`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vtoric::blowup::{
    blowup_subdivision, build_tower, common_refinement, is_u_admissible, product_ideal, refines, InvariantIdeal,
};
use vtoric::fan::GammaFan;
use vtoric::gamma_cone::{GammaCone, GammaIneq, ValuationMode};
use vtoric::polyhedral::{linalg, Cone, Vector};
use vtoric::projective::{
    cone_to_face, face_to_cone, generated_fan, normalization_fan, regular_subdivision, WeightedConfig,
};
use vtoric::semigroup::{
    algebra_generators, hilbert_basis, is_saturated_bounded, saturation_membership, MonomialDatum, SemigroupGens,
};
use vtoric::{Error, Scalar, ValueGroup};
use vtoric_cli::format::{parse_config, parse_fan, parse_ideal, serialize_config, serialize_fan, serialize_ideal, Overrides};
use vtoric_cli::svg::render_slice_svg;

/// Sub-checks that cannot hold as stated; see the analysis printed with them.
const KNOWN_UNATTAINABLE: &[&str] = &["1b-reverse"];

struct Outcome {
    failures: Vec<(String, String)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn check(&mut self, id: &str, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push((id.to_string(), detail()));
        }
    }
}

fn q(m: &[i64], c: Scalar) -> GammaIneq {
    GammaIneq::new(m.to_vec(), c)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn ints(xs: &[i64]) -> Vector {
    linalg::from_ints(xs)
}

fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    let den = rng.gen_range(1..=3);
    Scalar::frac(rng.gen_range(lo * den..=hi * den), den)
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

// ---------------------------------------------------------------- criterion 1

fn triangle(gamma: &ValueGroup, lambda: &Scalar) -> GammaCone {
    GammaCone::new(
        gamma,
        2,
        vec![q(&[1, 0], int(0)), q(&[0, 1], int(0)), q(&[-1, -1], lambda.clone())],
    )
    .unwrap()
}

fn criterion_1(out: &mut Outcome) {
    let gamma = ValueGroup::rationals();
    for lambda in [int(1), Scalar::frac(3, 2), int(5)] {
        let sigma = triangle(&gamma, &lambda);
        let census = sigma.special_fiber_census(&gamma).unwrap();
        out.check("1a-census", census.len() == 3, || format!("{} components for λ = {lambda}", census.len()));
        let rec = sigma.slice(&int(0)).unwrap();
        out.check("1a-recession", rec.rays().is_empty() && rec.lineality().is_empty() && !rec.is_empty(), || {
            format!("generic recession cone is not {{0}} for λ = {lambda}")
        });
        let reduced = sigma.reducedness_flag(&gamma, ValuationMode::Dense).unwrap();
        out.check("1a-reduced", reduced, || "special fiber not reduced in dense mode".into());

        let s = algebra_generators(&sigma, &gamma, ValuationMode::Dense).unwrap();
        let md = |u: &[i64], g: Scalar| MonomialDatum::new(u.to_vec(), g);
        let expected = vec![md(&[-1, -1], lambda.clone()), md(&[0, 1], int(0)), md(&[1, 0], int(0))];
        out.check("1b-generators", s.elements() == expected.as_slice(), || {
            format!("algebra generators {:?}", s.elements())
        });
        // x, y, a/x, a/y, a·y/x, a·x/y
        let six = SemigroupGens::new(
            &gamma,
            2,
            vec![
                md(&[1, 0], int(0)),
                md(&[0, 1], int(0)),
                md(&[-1, 0], lambda.clone()),
                md(&[0, -1], lambda.clone()),
                md(&[-1, 1], lambda.clone()),
                md(&[1, -1], lambda.clone()),
            ],
        )
        .unwrap();
        let forward = six
            .elements()
            .iter()
            .all(|d| saturation_membership(&s, d, &gamma).unwrap());
        out.check("1b-forward", forward, || "a listed generator is outside the saturation".into());
        let missing: Vec<&MonomialDatum> = s
            .elements()
            .iter()
            .filter(|d| !saturation_membership(&six, d, &gamma).unwrap())
            .collect();
        out.check("1b-reverse", missing.is_empty(), || {
            let m: Vec<String> = missing.iter().map(|d| format!("({d})")).collect();
            format!(
                "λ = {lambda}: {} not in the saturation of the six listed generators; every listed \
                 exponent has u1 + u2 >= -1 at height λ, so u = (-1,-1) needs height >= 2λ there",
                m.join(", ")
            )
        });
    }
}

// ---------------------------------------------------------------- criterion 2

fn random_config(rng: &mut ChaCha8Rng, n: usize) -> Option<WeightedConfig> {
    let count = rng.gen_range(2..=6);
    let mut points = Vec::new();
    let mut heights = Vec::new();
    for _ in 0..count {
        points.push((0..n).map(|_| rng.gen_range(-2..=2)).collect());
        heights.push(if rng.gen_bool(0.1) { None } else { Some(rational(rng, -3, 3)) });
    }
    let cfg = WeightedConfig::new(ValueGroup::rationals(), ValuationMode::Dense, n, points, heights).ok()?;
    let dim = vtoric::projective::weight_polytope(&cfg).dim();
    (dim == Some(n)).then_some(cfg)
}

fn fixed_configs() -> Vec<WeightedConfig> {
    let over = Overrides::default();
    let mut out = Vec::new();
    for f in ["p1.cfg", "square.cfg"] {
        out.push(parse_config(&std::fs::read_to_string(fixtures().join(f)).unwrap(), &over).unwrap());
    }
    let mk = |pts: &[&[i64]], hs: &[i64]| {
        WeightedConfig::new(
            ValueGroup::rationals(),
            ValuationMode::Dense,
            pts[0].len(),
            pts.iter().map(|p| p.to_vec()).collect(),
            hs.iter().map(|&h| Some(int(h))).collect(),
        )
        .unwrap()
    };
    out.push(mk(&[&[0], &[1]], &[0, 0]));
    out.push(mk(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[0, 0, 0, 0]));
    out.push(mk(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[0, 0, 0, 7]));
    out.push(mk(&[&[0], &[1], &[2]], &[0, 1, 0]));
    out.push(mk(&[&[0], &[1], &[2]], &[1, 0, 1]));
    out
}

fn criterion_2(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut configs = fixed_configs();
    let mut random = 0;
    while random < 200 {
        let n = rng.gen_range(1..=2);
        if let Some(c) = random_config(&mut rng, n) {
            configs.push(c);
            random += 1;
        }
    }
    for (k, cfg) in configs.iter().enumerate() {
        let g = generated_fan(cfg);
        let h = normalization_fan(cfg);
        match (g, h) {
            (Ok(g), Ok(h)) => {
                out.check("2-equal", g == h, || format!("config {k}: fans differ\n{cfg}"));
                out.check("2-valid", g.is_valid(), || format!("config {k}: generated fan invalid"));
                out.check("2-complete", g.is_complete().unwrap_or(false), || {
                    format!("config {k}: generated fan incomplete")
                });
            }
            (g, h) => out.check("2-defined", false, || format!("config {k}: {:?} / {:?}", g.err(), h.err())),
        }
    }
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut configs = fixed_configs();
    while configs.len() < 40 {
        if let Some(c) = random_config(&mut rng, 2) {
            configs.push(c);
        }
    }
    for (k, cfg) in configs.iter().enumerate() {
        let sub = regular_subdivision(cfg);
        let cells: Vec<_> = sub.faces().iter().map(|f| face_to_cone(cfg, f).unwrap()).collect();
        for (face, cell) in sub.faces().iter().zip(&cells) {
            out.check("3-dim", cell.dim().map(|d| d + face.dim) == Some(cfg.n()), || {
                format!("config {k}: face {face} has cell of dim {:?}", cell.dim())
            });
            let back = cone_to_face(cfg, cell);
            out.check("3-inverse", back.as_ref().ok() == Some(face), || {
                format!("config {k}: face {face} maps back to {back:?}")
            });
            let recession = cell.recession_cone();
            for (other, cell2) in sub.faces().iter().zip(&cells) {
                let contained = face.vertices.iter().all(|v| other.vertices.contains(v));
                if contained {
                    let reversed = cell2.vertices().iter().all(|v| cell.contains(v))
                        && cell2.rays().iter().all(|r| recession.contains(r));
                    out.check("3-order", reversed, || format!("config {k}: inclusion not reversed"));
                }
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 4

fn random_gamma_cone(rng: &mut ChaCha8Rng, n: usize, full: bool) -> Option<GammaCone> {
    let count = rng.gen_range(n + 1..=n + 3);
    let rays: Vec<Vector> = (0..count)
        .map(|_| {
            let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            v.push(rng.gen_range(0..=2));
            ints(&v)
        })
        .collect();
    let cone = Cone::from_generators(n + 1, rays, vec![]).ok()?;
    if !cone.is_pointed() || cone.is_origin() || (full && !cone.is_full_dimensional()) {
        return None;
    }
    GammaCone::from_cone(&cone, &ValueGroup::rationals(), &[]).ok()
}

fn certified(input: &GammaFan, output: &GammaFan) -> bool {
    output.is_valid() && output.is_complete().unwrap_or(false) && input.cones().iter().all(|c| output.has_cone(c))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_vtoric")).args(args).output().unwrap();
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn criterion_4(out: &mut Outcome, tmp: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let gamma = ValueGroup::rationals();
    let mode = ValuationMode::Dense;
    // convex support: a random cone cut by a random complete fan
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(1..=2);
        let Some(c) = random_gamma_cone(&mut rng, n, true) else { continue };
        let Some(cfg) = random_config(&mut rng, n) else { continue };
        let Ok(g) = generated_fan(&cfg) else { continue };
        let base = GammaFan::new(gamma.clone(), mode, n, vec![c]).unwrap();
        let Ok(fan) = common_refinement(&base, &g) else { continue };
        if !fan.is_valid() {
            continue;
        }
        done += 1;
        match fan.complete_extension() {
            Ok(f) => out.check("4-convex", certified(&fan, &f), || format!("uncertified completion of\n{}", serialize_fan(&fan))),
            Err(e) => out.check("4-convex", false, || format!("{e} on\n{}", serialize_fan(&fan))),
        }
    }
    // single cones
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(1..=3);
        let full = rng.gen_bool(0.7);
        let Some(c) = random_gamma_cone(&mut rng, n, full) else { continue };
        let fan = GammaFan::new(gamma.clone(), mode, n, vec![c]).unwrap();
        done += 1;
        match fan.complete_extension() {
            Ok(f) => out.check("4-single", certified(&fan, &f), || format!("uncertified completion of\n{}", serialize_fan(&fan))),
            Err(e) => out.check("4-single", false, || format!("{e} on\n{}", serialize_fan(&fan))),
        }
    }
    // general position: complete fans with cones removed
    let mut done = 0;
    let mut failures = 0;
    while done < 40 {
        let n = rng.gen_range(1..=2);
        let Some(cfg) = random_config(&mut rng, n) else { continue };
        let Ok(g) = generated_fan(&cfg) else { continue };
        if g.cones().len() < 3 {
            continue;
        }
        let kept: Vec<GammaCone> = g.cones().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if kept.is_empty() || kept.len() == g.cones().len() {
            continue;
        }
        let fan = GammaFan::new(gamma.clone(), mode, n, kept).unwrap();
        done += 1;
        match fan.complete_extension() {
            Ok(f) => out.check("4-general", certified(&fan, &f), || format!("uncertified completion of\n{}", serialize_fan(&fan))),
            Err(Error::ExtensionFailure { .. }) => {
                failures += 1;
                let path = tmp.join(format!("fail{failures}.fan"));
                std::fs::write(&path, serialize_fan(&fan)).unwrap();
                let (code, _, err) = run_cli(&["complete", path.to_str().unwrap()]);
                out.check("4-general-exit", code == 3 && err.contains("conflict"), || {
                    format!("extension failure exited with {code}: {err}")
                });
            }
            Err(e) => out.check("4-general", false, || format!("unexpected error {e}")),
        }
    }
    println!("  criterion 4: general-position extension failures: {failures} of 40");
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut complete = Vec::new();
    let mut incomplete = Vec::new();
    while complete.len() < 50 || incomplete.len() < 50 {
        let n = rng.gen_range(1..=2);
        let Some(cfg) = random_config(&mut rng, n) else { continue };
        let Ok(g) = generated_fan(&cfg) else { continue };
        if complete.len() < 50 {
            complete.push(g.clone());
        }
        if incomplete.len() < 50 && g.cones().len() >= 2 {
            let drop = rng.gen_range(0..g.cones().len());
            let kept: Vec<GammaCone> = g.cones().iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, c)| c.clone()).collect();
            incomplete.push(GammaFan::new(g.gamma().clone(), g.mode(), n, kept).unwrap());
        }
    }
    for (k, fan) in complete.iter().chain(&incomplete).enumerate() {
        let n = fan.n();
        let mut covered = true;
        for _ in 0..1000 {
            let mut x: Vector = (0..n).map(|_| rational(&mut rng, -20, 20)).collect();
            x.push(rational(&mut rng, 0, 20));
            if !fan.support_contains(&x) {
                covered = false;
                break;
            }
        }
        let checker = fan.is_complete().unwrap();
        out.check("5-agree", checker == covered, || {
            format!("fan {k}: is_complete = {checker}, sampling = {covered}\n{}", serialize_fan(fan))
        });
        out.check("5-expected", checker == (k < 50), || format!("fan {k}: unexpected completeness {checker}"));
    }
}

// ---------------------------------------------------------------- criterion 6

fn random_ideal(rng: &mut ChaCha8Rng, chart: &GammaCone) -> InvariantIdeal {
    loop {
        let count = rng.gen_range(1..=3);
        let mut gens = Vec::new();
        while gens.len() < count {
            let u = vec![rng.gen_range(-2..=3), rng.gen_range(-2..=3)];
            let d = MonomialDatum::new(u, rational(rng, 0, 4));
            if vtoric::semigroup::in_weight_algebra(chart, &d) {
                gens.push(d);
            }
        }
        let s = SemigroupGens::new(&ValueGroup::rationals(), 2, gens).unwrap();
        if let Ok(i) = InvariantIdeal::new(chart.clone(), s) {
            return i;
        }
    }
}

fn covers(fan: &GammaFan, chart: &GammaCone, rng: &mut ChaCha8Rng) -> bool {
    let rays = chart.cone().rays().to_vec();
    (0..200).all(|_| {
        let mut x = vec![Scalar::zero(); 3];
        for r in &rays {
            x = linalg::add(&x, &linalg::scale(r, &int(rng.gen_range(0..=5))));
        }
        fan.support_contains(&x)
    }) && fan.cones().iter().all(|c| chart.cone().contains_cone(c.cone()))
}

fn criterion_6(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gamma = ValueGroup::rationals();
    let mode = ValuationMode::Dense;
    let quadrant = GammaCone::new(&gamma, 2, vec![q(&[1, 0], int(0)), q(&[0, 1], int(0))]).unwrap();
    let charts = [quadrant, triangle(&gamma, &int(2))];
    for k in 0..100 {
        let chart = &charts[k % 2];
        let a = random_ideal(&mut rng, chart);
        let b = random_ideal(&mut rng, chart);
        let fa = blowup_subdivision(&a, &gamma, mode).unwrap();
        let fb = blowup_subdivision(&b, &gamma, mode).unwrap();
        let fab = blowup_subdivision(&product_ideal(&a, &b).unwrap(), &gamma, mode).unwrap();
        let refined = common_refinement(&fa, &fb).unwrap();
        out.check("6-square", fab == refined, || format!("instance {k}: product and refinement differ"));
        out.check("6-valid", fab.is_valid(), || format!("instance {k}: subdivision invalid"));
        for face in chart.faces() {
            if is_u_admissible(&a, std::slice::from_ref(&face)).unwrap() {
                let intact = face.faces().iter().all(|t| fa.all_cones().iter().any(|c| c.cone() == t.cone()));
                out.check("6-admissible", intact, || format!("instance {k}: admissible face not intact"));
            }
        }
        let tower = build_tower(chart, &[a.generators().clone(), b.generators().clone()], 2, &gamma, mode).unwrap();
        let mut prev = &tower.base;
        for (_, level) in &tower.levels {
            out.check("6-tower", refines(level, prev) && covers(level, chart, &mut rng), || {
                format!("instance {k}: tower level not monotone")
            });
            prev = level;
        }
        out.check("6-tower-top", tower.top() == &fab, || format!("instance {k}: tower top differs from product"));
    }
}

// ---------------------------------------------------------------- criterion 7

fn int_rows(rows: &[Vector]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| linalg::canonical_direction(r).iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every integer point of the box `lo..=hi` satisfying the
/// inequalities `a·y ≥ b` and the equations `e·y = 0`; the last coordinate is
/// solved for rather than scanned.
fn lattice_points(lo: &[i64], hi: &[i64], ineqs: &[(Vec<i64>, i64)], eqs: &[Vec<i64>], f: &mut impl FnMut(&[i64])) {
    let k = lo.len();
    let mut y = lo.to_vec();
    loop {
        let (mut a, mut b) = (lo[k - 1], hi[k - 1]);
        let mut fixed = None;
        let mut ok = true;
        for (row, rhs) in ineqs {
            let c = row[k - 1];
            let rest = idot(&row[..k - 1], &y[..k - 1]);
            // c·t ≥ rhs − rest
            let need = rhs - rest;
            if c > 0 {
                a = a.max(need.div_euclid(c) + i64::from(need.rem_euclid(c) != 0));
            } else if c < 0 {
                b = b.min((-need).div_euclid(-c));
            } else if need > 0 {
                ok = false;
            }
        }
        for row in eqs {
            let c = row[k - 1];
            let rest = idot(&row[..k - 1], &y[..k - 1]);
            if c == 0 {
                ok &= rest == 0;
            } else if rest % c != 0 {
                ok = false;
            } else {
                let t = -rest / c;
                ok &= fixed.is_none_or(|s| s == t);
                fixed = Some(t);
            }
        }
        if ok {
            if let Some(t) = fixed {
                a = a.max(t);
                b = b.min(t);
            }
            for t in a..=b {
                y[k - 1] = t;
                f(&y);
            }
        }
        let mut i = k - 1;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if y[i] < hi[i] {
                y[i] += 1;
                y[i + 1..k - 1].copy_from_slice(&lo[i + 1..k - 1]);
                break;
            }
        }
    }
}

/// Irreducible lattice points of a pointed cone inside `[−bound, bound]^k`, by
/// enumeration. Decompositions `x = y + z` are bounded by a linear form `ℓ`
/// positive on `C ∖ {0}`, so it suffices to list all lattice points of
/// `C ∩ {ℓ ≤ L}` and sweep them by increasing `ℓ`; `x` is reducible iff
/// `x − h ∈ C` for some irreducible `h ≠ x` found earlier.
fn brute_irreducibles(cone: &Cone, bound: i64) -> HashSet<Vec<i64>> {
    let k = cone.ambient_dim();
    let facets = int_rows(cone.facet_normals());
    let eqs = int_rows(cone.equations());
    let ell: Vec<i64> = (0..k).map(|i| facets.iter().map(|a| a[i]).sum()).collect();
    let in_cone = |x: &[i64]| facets.iter().all(|a| idot(a, x) >= 0) && eqs.iter().all(|e| idot(e, x) == 0);
    let cone_rows: Vec<(Vec<i64>, i64)> = facets.iter().map(|a| (a.clone(), 0)).collect();

    let mut big = 0;
    lattice_points(&vec![-bound; k], &vec![bound; k], &cone_rows, &eqs, &mut |x| big = big.max(idot(&ell, x)));
    let mut lo = vec![0i64; k];
    let mut hi = vec![0i64; k];
    for r in int_rows(cone.rays()) {
        let s = idot(&ell, &r);
        assert!(s > 0);
        for i in 0..k {
            let t = r[i] * big;
            lo[i] = lo[i].min(t.div_euclid(s));
            hi[i] = hi[i].max(-(-t).div_euclid(s));
        }
    }
    let mut rows = cone_rows.clone();
    rows.push((ell.iter().map(|c| -c).collect(), -big));
    let mut pts = Vec::new();
    lattice_points(&lo, &hi, &rows, &eqs, &mut |y| {
        if y.iter().any(|&c| c != 0) {
            pts.push(y.to_vec())
        }
    });
    pts.sort_by_key(|p| idot(&ell, p));
    let mut irreducible: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        let reducible = irreducible
            .iter()
            .any(|h| *h != p && in_cone(&p.iter().zip(h).map(|(a, b)| a - b).collect::<Vec<_>>()));
        if !reducible {
            irreducible.push(p);
        }
    }
    irreducible.into_iter().filter(|h| h.iter().all(|c| c.abs() <= bound)).collect()
}

fn criterion_7(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 50 {
        let k = if done % 2 == 0 { 2 } else { 3 };
        let count = if k == 2 { 2 } else { rng.gen_range(3..=4) };
        let rays: Vec<Vector> = (0..count)
            .map(|_| ints(&(0..k).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>()))
            .collect();
        let Ok(cone) = Cone::from_generators(k, rays, vec![]) else { continue };
        if !cone.is_pointed() || cone.is_origin() {
            continue;
        }
        done += 1;
        let hb: HashSet<Vec<i64>> = hilbert_basis(&cone)
            .unwrap()
            .into_iter()
            .filter(|h| h.iter().all(|c| c.abs() <= 6))
            .collect();
        let brute = brute_irreducibles(&cone, 6);
        out.check("7-hilbert", hb == brute, || format!("cone {cone:?}: {hb:?} vs {brute:?}"));
    }
    let over = Overrides::default();
    let mut fixtures_cones: Vec<(String, GammaCone, ValueGroup, ValuationMode)> = Vec::new();
    for f in ["triangle.fan", "quadrant.fan", "complete_line.fan"] {
        let fan = parse_fan(&std::fs::read_to_string(fixtures().join(f)).unwrap(), &over).unwrap();
        for c in fan.cones() {
            fixtures_cones.push((f.to_string(), c.clone(), fan.gamma().clone(), fan.mode()));
        }
    }
    for cfg in fixed_configs() {
        let fan = normalization_fan(&cfg).unwrap();
        for c in fan.cones() {
            fixtures_cones.push(("config".into(), c.clone(), fan.gamma().clone(), fan.mode()));
        }
    }
    let z = ValueGroup::integers();
    fixtures_cones.push(("triangle over ℤ".into(), triangle(&z, &int(3)), z, ValuationMode::Discrete));
    for (name, c, gamma, mode) in &fixtures_cones {
        let s = algebra_generators(c, gamma, *mode).unwrap();
        let (ok, w) = is_saturated_bounded(&s, 6, gamma).unwrap();
        out.check("7-saturated", ok, || format!("{name}: witness {w:?}"));
    }
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8(out: &mut Outcome, tmp: &Path) {
    let over = Overrides::default();
    let dir = fixtures();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in &names {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let ok = if name.ends_with(".fan") {
            match parse_fan(&text, &over) {
                Ok(f) => {
                    let s = serialize_fan(&f);
                    let g = parse_fan(&s, &over).unwrap();
                    g == f && serialize_fan(&g) == s
                }
                Err(_) => true,
            }
        } else if name.ends_with(".cfg") {
            let c = parse_config(&text, &over).unwrap();
            let s = serialize_config(&c);
            parse_config(&s, &over).unwrap() == c && serialize_config(&parse_config(&s, &over).unwrap()) == s
        } else if name.ends_with(".ideal") {
            let (h, i) = parse_ideal(&text, &over).unwrap();
            let s = serialize_ideal(&h.gamma, &i);
            let (h2, i2) = parse_ideal(&s, &over).unwrap();
            i2 == i && serialize_ideal(&h2.gamma, &i2) == s
        } else {
            true
        };
        out.check("8-roundtrip", ok, || format!("{name} does not round-trip"));
    }

    let path = |f: &str| dir.join(f).to_string_lossy().into_owned();
    let cases: &[(&[&str], i32)] = &[
        (&["check", &path("complete_line.fan")], 0),
        (&["check", &path("bad_key.fan")], 1),
        (&["check", "/nonexistent/file.fan"], 1),
        (&["check", &path("bad_gamma.fan")], 2),
        (&["check", &path("overlap.fan")], 2),
        (&["check", &path("not_admissible.fan")], 2),
        (&["svg", &path("complete_line.fan")], 2),
        (&["complete", &path("triangle.fan")], 0),
        (&["complete", &path("extension_failure.fan")], 3),
        (&["no-such-command"], 1),
    ];
    for (args, expected) in cases {
        let (code, _, _) = run_cli(args);
        out.check("8-exit", code == *expected, || format!("{args:?} exited {code}, expected {expected}"));
    }
    let (_, stdout, _) = run_cli(&["check", &path("complete_line.fan")]);
    out.check("8-check", stdout.contains("valid: yes") && stdout.contains("complete: yes"), || stdout.clone());
    let completed = tmp.join("completed.fan");
    run_cli(&["complete", &path("triangle.fan"), "--output", completed.to_str().unwrap()]);
    let (_, stdout, _) = run_cli(&["check", completed.to_str().unwrap()]);
    out.check("8-complete", stdout.contains("complete: yes"), || stdout.clone());

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/triangle_level1.svg");
    let expected = std::fs::read(&golden).unwrap();
    for _ in 0..2 {
        let (code, stdout, _) = run_cli(&["svg", "--level", "1", &path("triangle.fan")]);
        out.check("8-svg", code == 0 && stdout.as_bytes() == expected.as_slice(), || "SVG differs from golden file".into());
    }
    let fan = parse_fan(&std::fs::read_to_string(dir.join("triangle.fan")).unwrap(), &over).unwrap();
    let svg = render_slice_svg(&fan, &int(1)).unwrap();
    out.check("8-svg-content", svg.matches("<polygon").count() == 1 && svg.matches("class=\"label\"").count() == 3, || {
        "triangle drawing is not one polygon with three labels".into()
    });
}

// ---------------------------------------------------------------- runner

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    type Crit = Box<dyn Fn(&mut Outcome)>;
    let t1 = tmp.path().to_path_buf();
    let t2 = tmp.path().to_path_buf();
    let criteria: Vec<(u32, &str, Duration, Crit)> = vec![
        (1, "triangle fixture", Duration::from_secs(1), Box::new(criterion_1)),
        (2, "normalization fan equals generated fan", Duration::from_secs(60), Box::new(criterion_2)),
        (3, "face/cell duality", Duration::from_secs(10), Box::new(criterion_3)),
        (4, "fan completion", Duration::from_secs(120), Box::new(move |o| criterion_4(o, &t1))),
        (5, "completeness vs sampling oracle", Duration::from_secs(30), Box::new(criterion_5)),
        (6, "blow-up laws", Duration::from_secs(30), Box::new(criterion_6)),
        (7, "Hilbert bases and saturation", Duration::from_secs(60), Box::new(criterion_7)),
        (8, "command-line contract", Duration::from_secs(5), Box::new(move |o| criterion_8(o, &t2))),
    ];
    let mut unexpected = 0;
    for (id, name, limit, run) in criteria {
        let mut out = Outcome::new();
        let start = Instant::now();
        run(&mut out);
        let elapsed = start.elapsed();
        if elapsed > limit {
            out.failures.push(("time".into(), format!("took {elapsed:.2?}, limit {limit:?}")));
        }
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id} ({name}): {status} [{elapsed:.2?}]");
        let mut shown: HashSet<String> = HashSet::new();
        for (check, detail) in &out.failures {
            let known = KNOWN_UNATTAINABLE.contains(&check.as_str());
            if !known {
                unexpected += 1;
            }
            if shown.insert(check.clone()) {
                let tag = if known { " (recorded as unattainable)" } else { "" };
                println!("  {check}{tag}: {detail}");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
