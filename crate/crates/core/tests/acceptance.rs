//! Acceptance criteria, one PASS/FAIL line each. Randomized parts use a
//! fixed seed so every run checks the same instances.

use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use danielewski::algebra::{rat, Rational, UniPoly};
use danielewski::fibration::{
    double_section_discriminant, double_section_special_values, euler_report,
    verify_conic_pencil_identity, verify_deg4_parametrization, verify_nu0_eigenvalue,
    verify_trivialization, FibrationSpec, Quartic,
};
use danielewski::algebra::registry::Z;
use danielewski::graphcalc::{
    contract_to_minimal, make_standard_from_semistandard, normalize_via_zero_moves, reversion,
    ModStep, PathGraph, Snapshot, VertexId, WeightedGraph, Zigzag,
};
use danielewski::surface::{Surface, SurfaceDef};
use danielewski::vfield::{
    build_family, generators, nu0, preserves_fibration, FamilyParams, FieldError, PolyFlow,
    VectorField,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SWEEP: [&str; 4] = ["z^2 - 1", "z^3 - z", "z^4 - 1", "z^5 - z"];
const CAP: usize = 32;

fn surf(p: &str) -> Surface {
    SurfaceDef::parse(p).expect("valid p")
}

fn uni(text: &str) -> UniPoly {
    UniPoly::parse(text, "t").expect("valid polynomial")
}

fn rand_poly(rng: &mut ChaCha8Rng, max_len: usize) -> UniPoly {
    let len = rng.gen_range(0..=max_len);
    UniPoly::from_ints(&(0..len).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
}

fn coprime_pair(rng: &mut ChaCha8Rng, max: u32) -> (u32, u32) {
    loop {
        let (m, n) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
        if m.gcd(&n) == 1 {
            return (m, n);
        }
    }
}

fn random_family1(rng: &mut ChaCha8Rng) -> FamilyParams {
    FamilyParams::Family1 {
        c: rat(rng.gen_range(-3..=3)),
        a: rand_poly(rng, 3),
        b: rand_poly(rng, 3),
    }
}

/// A valid family (2) member: either `Q = 0` with `A(0) = c/(m+nl)`, or
/// `Q != 0`, `c = 0` and `A` divisible by `t^k` with `m k >= l + 1`.
fn random_family2(rng: &mut ChaCha8Rng, max_mn: u32) -> FamilyParams {
    let (m, n) = coprime_pair(rng, max_mn);
    let l = rng.gen_range(0..=3);
    let shift = rat(rng.gen_range(-2..=2));
    let q = UniPoly::from_ints(&(0..l).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>());
    let tail = rand_poly(rng, 2);
    if !q.is_zero() && rng.gen_bool(0.5) {
        let k = ((l + m) / m) as usize; // ceil((l + 1) / m)
        let mut coeffs = vec![Rational::from_integer(0.into()); k];
        coeffs.extend(if tail.is_zero() { vec![rat(1)] } else { tail.coeffs().to_vec() });
        FamilyParams::Family2 { c: rat(0), a: UniPoly::from_coeffs(coeffs), m, n, l, shift, q }
    } else {
        let c = rat(rng.gen_range(-3..=3));
        let a0 = &c / rat((m + n * l) as i64);
        let mut coeffs = vec![a0];
        coeffs.extend(tail.coeffs().iter().cloned());
        FamilyParams::Family2 { c, a: UniPoly::from_coeffs(coeffs), m, n, l, shift, q: UniPoly::zero() }
    }
}

fn random_quartic(rng: &mut ChaCha8Rng) -> UniPoly {
    loop {
        let mut c: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        c.push(rng.gen_range(1..=3));
        let p = UniPoly::from_ints(&c);
        if p.has_simple_roots() {
            return p;
        }
    }
}

fn tangency_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for p in SWEEP {
        let s = surf(p);
        let g = generators(&s);
        for (name, v) in [("HF", &g.hf), ("SF^x", &g.sfx), ("SF^y", &g.sfy)] {
            ensure!(v.tangency_residue().is_zero(), "{name} on {p}: {}", v.tangency_residue());
            checked += 1;
        }
        for i in 0..50 {
            let params = if i % 2 == 0 { random_family1(&mut rng) } else { random_family2(&mut rng, 4) };
            let v = build_family(&params, &s).map_err(|e| format!("{params:?} on {p}: {e}"))?;
            ensure!(v.tangency_residue().is_zero(), "{params:?} on {p}: {}", v.tangency_residue());
            checked += 1;
        }
        if s.degree() == 4 {
            for _ in 0..10 {
                let params = FamilyParams::Family3 { a: rand_poly(&mut rng, 3) };
                let v = build_family(&params, &s).map_err(|e| e.to_string())?;
                ensure!(v.is_tangent(), "{params:?}: {}", v.tangency_residue());
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} fields, all residues 0"))
}

fn bracket_structure() -> Outcome {
    for p in SWEEP {
        let s = surf(p);
        let g = generators(&s);
        ensure!(g.hf.bracket(&g.sfx) == g.sfx, "[HF,SF^x] on {p}: {:?}", g.hf.bracket(&g.sfx));
        ensure!(g.hf.bracket(&g.sfy) == -&g.sfy, "[HF,SF^y] on {p}: {:?}", g.hf.bracket(&g.sfy));
        let triple = [&g.hf, &g.sfx, &g.sfy];
        for u in triple {
            for v in triple {
                ensure!(u.bracket(v) == -&v.bracket(u), "antisymmetry on {p}");
            }
        }
        let (u, v, w) = (&g.hf, &g.sfx, &g.sfy);
        let jacobi = &(&u.bracket(&v.bracket(w)) + &v.bracket(&w.bracket(u))) + &w.bracket(&u.bracket(v));
        ensure!(jacobi.is_zero(), "Jacobi on {p}: {jacobi:?}");
    }
    Ok("exact on the sweep".into())
}

fn family_validation() -> Outcome {
    let s = surf("z^2 - 1");
    let bad_a0 = FamilyParams::Family2 {
        c: rat(1),
        a: uni("2"),
        m: 1,
        n: 1,
        l: 0,
        shift: rat(0),
        q: UniPoly::zero(),
    };
    match build_family(&bad_a0, &s) {
        Err(FieldError::Validation { condition, witness }) if condition.contains("A(0)") => {
            ensure!(witness.contains("A(0) = 2"), "witness {witness}")
        }
        other => return Err(format!("A(0) violation not rejected: {other:?}")),
    }
    let bad_membership = FamilyParams::Family2 {
        c: rat(2),
        a: uni("1"),
        m: 1,
        n: 1,
        l: 1,
        shift: rat(2),
        q: UniPoly::from_ints(&[3]),
    };
    match build_family(&bad_membership, &s) {
        Err(FieldError::Validation { condition, witness }) if condition.contains("x^(l+1)") => {
            ensure!(witness.contains("obstruction"), "witness {witness}")
        }
        other => return Err(format!("membership violation not rejected: {other:?}")),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_deg = 0;
    for i in 0..20 {
        let p = SWEEP[i % SWEEP.len()];
        let s = surf(p);
        let params = random_family2(&mut rng, 4);
        let v = build_family(&params, &s).map_err(|e| format!("{params:?} on {p}: {e}"))?;
        let f = params.fibration().as_surface_elem(&s).map_err(|e| e.to_string())?;
        let h = preserves_fibration(&v, &f, CAP).map_err(|e| e.to_string())?;
        let h = h.ok_or_else(|| format!("{params:?} on {p}: no h"))?;
        max_deg = max_deg.max(h.degree().unwrap_or(0));
    }
    Ok(format!("2 violations rejected with witnesses; 20 valid members, max deg h = {max_deg}"))
}

fn fiber_fixtures() -> Outcome {
    let s = surf("z^2 - 1");
    let h = preserves_fibration(&generators(&s).hf, &s.x(), CAP).map_err(|e| e.to_string())?;
    ensure!(h == Some(uni("t")), "(HF, x): {h:?}");
    let params = FamilyParams::Family2 {
        c: rat(1),
        a: uni("1 + t"),
        m: 1,
        n: 1,
        l: 0,
        shift: rat(0),
        q: UniPoly::zero(),
    };
    let v = build_family(&params, &s).map_err(|e| e.to_string())?;
    let xz = s.parse_elem("x*z").map_err(|e| e.to_string())?;
    let h = preserves_fibration(&v, &xz, CAP).map_err(|e| e.to_string())?;
    ensure!(h == Some(uni("t")), "family (2) against xz: {h:?}");
    let s4 = surf("z^4 - 1");
    let v = build_family(&FamilyParams::Family3 { a: uni("1") }, &s4).map_err(|e| e.to_string())?;
    let f = s4.parse_elem("x + y + 2*z^2").map_err(|e| e.to_string())?;
    let h = preserves_fibration(&v, &f, CAP).map_err(|e| e.to_string())?;
    ensure!(h == Some(UniPoly::zero()), "family (3): {h:?}");
    Ok("h = t, t, 0".into())
}

fn euler_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ps: Vec<UniPoly> = SWEEP.iter().map(|p| UniPoly::parse(p, "z").unwrap()).collect();
    while ps.len() < 12 {
        let deg = rng.gen_range(2..=8);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-4..=4)).collect();
        c.push(rng.gen_range(1..=2));
        let p = UniPoly::from_ints(&c);
        if p.has_simple_roots() {
            ps.push(p);
        }
    }
    for p in &ps {
        let s = SurfaceDef::new(p.clone()).map_err(|e| e.to_string())?;
        let k = s.degree() as i64;
        let x = euler_report(&FibrationSpec::CoordX, &s).map_err(|e| e.to_string())?;
        // 1 * chi(C) + (k - 1)
        let x_side = 1 + (k - 1);
        ensure!(x.chi_s == Some(x_side) && x_side == k, "CoordX on {}: {:?}", p.format("z"), x.chi_s);
        let z = euler_report(&FibrationSpec::CoordZ, &s).map_err(|e| e.to_string())?;
        // 0 * chi(C) + k * (1 - 0)
        let z_side = k;
        ensure!(z.special_count as i64 == k, "CoordZ special count on {}", p.format("z"));
        ensure!(z.chi_s == Some(z_side), "CoordZ on {}: {:?}", p.format("z"), z.chi_s);
    }
    Ok(format!("chi_S = deg p on {} surfaces", ps.len()))
}

fn deg4_certificates() -> Outcome {
    let s = surf("z^4 - 1");
    let q = Quartic::numeric(&s, &rat(4), &rat(2)).map_err(|e| e.to_string())?;
    let param = verify_deg4_parametrization(&q, None).map_err(|e| e.to_string())?;
    ensure!(param.verified(), "{param}");
    let eigen = verify_nu0_eigenvalue(&q, None).map_err(|e| e.to_string())?;
    ensure!(eigen.verified(), "{eigen}");
    let value = eigen.details.as_ref().and_then(|d| d["eigenvalue"].as_str().map(String::from));
    ensure!(value.as_deref() == Some("4"), "eigenvalue {value:?}");
    let conic = verify_conic_pencil_identity(None, None, &rat(0)).map_err(|e| e.to_string())?;
    ensure!(conic.verified(), "{conic}");

    let tampered = verify_deg4_parametrization(&q, Some(&rat(-4))).map_err(|e| e.to_string())?;
    ensure!(!tampered.verified() && tampered.residue.as_deref() == Some("1"), "{tampered}");
    let g = generators(&s);
    let no_sfy: VectorField = &nu0(&s).map_err(|e| e.to_string())? + &g.sfy;
    let tampered = verify_nu0_eigenvalue(&q, Some(&no_sfy)).map_err(|e| e.to_string())?;
    ensure!(!tampered.verified(), "{tampered}");
    let tampered = verify_conic_pencil_identity(None, None, &rat(1)).map_err(|e| e.to_string())?;
    ensure!(!tampered.verified(), "{tampered}");
    Ok("3 identities verified, 3 perturbations falsified".into())
}

fn trivialization_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for m in 1..=5u32 {
        for n in 1..=5u32 {
            if m.gcd(&n) != 1 {
                continue;
            }
            for l in 0..=3u32 {
                for _ in 0..5 {
                    let q = UniPoly::from_ints(&(0..l).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
                    let a = Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into());
                    let spec = FibrationSpec::TwoSection { m, n, l, a, q };
                    let cert = verify_trivialization(&spec).map_err(|e| e.to_string())?;
                    ensure!(cert.verified(), "{spec:?}: {cert}");
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} shapes, f -> lambda^n exactly"))
}

fn random_graph(rng: &mut ChaCha8Rng) -> WeightedGraph {
    let n = rng.gen_range(1..=12u32);
    let mut g = WeightedGraph::new();
    for v in 0..n {
        g.add_vertex(v, rng.gen_range(-5..=2));
    }
    for v in 1..n {
        let _ = g.add_edge(rng.gen_range(0..v), v);
    }
    for _ in 0..rng.gen_range(0..3) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !g.has_edge(a, b) {
            let _ = g.add_edge(a, b);
        }
    }
    g
}

fn trail(log: &[danielewski::graphcalc::TranscriptEntry]) -> Vec<String> {
    log.iter()
        .map(|e| match &e.after {
            Snapshot::Zigzag(z) => z.clone(),
            Snapshot::Graph(g) => serde_json::to_string(g).unwrap_or_default(),
        })
        .collect()
}

fn replays(start: &Zigzag, moves: &[ModStep], end: &Zigzag) -> Result<(), String> {
    let path = PathGraph::from_zigzag(start);
    let mut elementary = Vec::new();
    let mut cur = path.clone();
    for m in moves {
        elementary.extend(cur.expand(m).map_err(|e| e.to_string())?);
        cur = cur.apply(m).map_err(|e| e.to_string())?;
    }
    ensure!(elementary.iter().all(ModStep::is_elementary), "non-elementary expansion");
    let (again, _) = path.replay(&elementary).map_err(|e| e.to_string())?;
    ensure!(again.zigzag() == *end && cur.zigzag() == *end, "{start}: replay ends at {}", again.zigzag());
    Ok(())
}

fn graph_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let g = random_graph(&mut rng);
        let v = rng.gen_range(0..g.len() as VertexId);
        let (up, e) = g.outer_blow_up(v).map_err(|e| e.to_string())?;
        ensure!(up.blow_down(e).map_err(|e| e.to_string())? == g, "outer round trip");
        let edge = g.edges().next();
        if let Some((a, b)) = edge {
            let (up, e) = g.inner_blow_up(a, b).map_err(|e| e.to_string())?;
            ensure!(up.blow_down(e).map_err(|e| e.to_string())? == g, "inner round trip");
        }
    }
    for _ in 0..100 {
        let k = rng.gen_range(2..=8);
        let mut w = vec![0, 0];
        w.extend((2..k).map(|_| rng.gen_range(-6..=-2)));
        let z = Zigzag(w);
        let (r, moves) = reversion(&z).map_err(|e| e.to_string())?;
        let (rr, _) = reversion(&r.reversed()).map_err(|e| e.to_string())?;
        ensure!(rr.reversed() == z, "reversion twice on {z}: {rr}");
        replays(&z, &moves, &r)?;
    }

    let zz = |s: &str| s.parse::<Zigzag>().expect("zigzag");
    let (std, moves) = make_standard_from_semistandard(&zz("[[0,-2,-3]]")).map_err(|e| e.to_string())?;
    ensure!(std == zz("[[0,0,-3]]"), "[[0,-2,-3]] -> {std}");
    let (_, log) = PathGraph::from_zigzag(&zz("[[0,-2,-3]]")).replay(&moves).map_err(|e| e.to_string())?;
    ensure!(trail(&log) == ["[[0,-1,-3]]", "[[0,0,-3]]"], "trail {:?}", trail(&log));
    replays(&zz("[[0,-2,-3]]"), &moves, &std)?;

    let (rev, moves) = reversion(&zz("[[0,0,-4]]")).map_err(|e| e.to_string())?;
    ensure!(rev == zz("[[-4,0,0]]"), "[[0,0,-4]] -> {rev}");
    let (_, log) = PathGraph::from_zigzag(&zz("[[0,0,-4]]")).replay(&moves).map_err(|e| e.to_string())?;
    ensure!(
        trail(&log) == ["[[-1,0,-3]]", "[[-2,0,-2]]", "[[-3,0,-1]]", "[[-4,0,0]]"],
        "trail {:?}",
        trail(&log)
    );
    replays(&zz("[[0,0,-4]]"), &moves, &rev)?;
    replays(&zz("[[0,0,-4]]"), &[ModStep::Reversion], &rev)?;

    let (norm, moves) = normalize_via_zero_moves(&zz("[[-2,0,-2]]")).map_err(|e| e.to_string())?;
    ensure!(norm == zz("[[0,0,-4]]"), "[[-2,0,-2]] -> {norm}");
    let (_, log) = PathGraph::from_zigzag(&zz("[[-2,0,-2]]")).replay(&moves).map_err(|e| e.to_string())?;
    ensure!(trail(&log) == ["[[-1,0,-3]]", "[[0,0,-4]]"], "trail {:?}", trail(&log));
    replays(&zz("[[-2,0,-2]]"), &moves, &norm)?;

    let (min, log) = contract_to_minimal(&PathGraph::from_zigzag(&zz("[[0,-1,-3]]")).graph);
    let min = PathGraph::from_graph(&min).map_err(|e| e.to_string())?.zigzag();
    ensure!(min == zz("[[1,-2]]") && log.len() == 1, "[[0,-1,-3]] -> {min}");
    ensure!(log[0].step == ModStep::BlowDown { vertex: 1 }, "step {}", log[0].step);
    Ok("200 graphs, 100 reversions, 4 goldens".into())
}

fn flow_verification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in SWEEP {
        let s = surf(p);
        let hf = PolyFlow::hf(&s);
        ensure!(hf.verify().map_err(|e| e.to_string())?, "HF flow on {p}");
        ensure!(hf.generator().map_err(|e| e.to_string())? == generators(&s).hf, "HF generator on {p}");
    }
    for i in 0..10 {
        let p = SWEEP[i % SWEEP.len()];
        let s = surf(p);
        let mut b = rand_poly(&mut rng, 3);
        if b.is_zero() {
            b = UniPoly::one();
        }
        let flow = PolyFlow::shear(&s, &b).map_err(|e| e.to_string())?;
        ensure!(flow.surface_residue().map_err(|e| e.to_string())?.is_zero(), "S-preservation, B = {}", b.format("x"));
        ensure!(
            flow.group_law_residue().map_err(|e| e.to_string())?.iter().all(|r| r.is_zero()),
            "group law, B = {}",
            b.format("x")
        );
        ensure!(flow.verify().map_err(|e| e.to_string())?, "identity at 0, B = {}", b.format("x"));
    }
    Ok("HF flow on 4 surfaces, 10 shear flows".into())
}

fn double_section_count() -> Outcome {
    let s = surf("z^4 - 1");
    let special = double_section_special_values(&s).map_err(|e| e.to_string())?;
    ensure!(special.degree() == Some(3), "z^4 - 1: {}", special.format("s"));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut counts = Vec::new();
    for _ in 0..10 {
        let p = random_quartic(&mut rng);
        let s = SurfaceDef::new(p.clone()).map_err(|e| e.to_string())?;
        let delta = double_section_discriminant(&s).map_err(|e| e.to_string())?;
        ensure!(delta.degree_in(Z).unwrap_or(0) <= 2, "Delta for {}: {delta}", p.format("z"));
        let n = double_section_special_values(&s).map_err(|e| e.to_string())?.degree().unwrap_or(0);
        ensure!(n >= 3, "{}: only {n} special values", p.format("z"));
        counts.push(n);
    }
    Ok(format!("z^4 - 1: 3; random quartics: {counts:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 tangency suite", tangency_suite),
        ("2 bracket structure", bracket_structure),
        ("3 family validation", family_validation),
        ("4 fiber-preservation fixtures", fiber_fixtures),
        ("5 Euler formula", euler_formula),
        ("6 deg-4 certificates", deg4_certificates),
        ("7 trivialization sweep", trivialization_sweep),
        ("8 graph calculus", graph_calculus),
        ("9 flow verification", flow_verification),
        ("10 double-section special fibers", double_section_count),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(note) => println!("PASS {name} ({note}; {ms} ms)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({ms} ms)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
