//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use itertools::Itertools;
use nashvop::equilibrium::{
    generalized_ne, intersection_superset, shared_constraint_ne, union_subset,
};
use nashvop::geometry::{dd_hrep_to_vrep, irredundant_union, relative_interior_point, Constraint};
use nashvop::lp::{efficiency_test, evaluate_regions, parametric_lp, solve_lp, LpProblem};
use nashvop::oracle::{CostExpr, GridSpec, OracleConstraint, OracleGame, StrategyLayout};
use nashvop::rational::{dot, frac, int, parse_rational, solve};
use nashvop::{
    dual_generators, Constraints, HPolyhedron, LinearGame, Player, Polytope, QMatrix, QVector,
    Rational,
};
use nashvop_cli::{
    cmd_best_response, cmd_oracle, cmd_solve, BestResponseSet, GameFile, LoadedGame, ResultFile,
    SolveMode,
};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Allowed gap between exact vertices and four-decimal published values.
const APPROX_TOL: f64 = 1e-4;
/// Random instances per property in criterion 7.
const PROPERTY_INSTANCES: usize = 100;
/// Sample points per parametric instance.
const PARAMETRIC_SAMPLES: usize = 100;
/// Random games in criterion 8.
const CROSS_GAMES: usize = 20;
const SEED: u64 = 0x6e61_7368;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> LoadedGame {
    GameFile::load(&fixtures().join(name)).unwrap()
}

/// The result document must match the shipped expected file byte for byte.
fn matches_expected(result: &ResultFile, name: &str) -> Result<(), String> {
    let path = fixtures().join("expected").join(name);
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure(
        result.to_json() == expected,
        format!("output differs from {name}"),
    )?;
    ensure(
        ResultFile::from_json(&expected).unwrap() == *result,
        format!("{name} does not round trip"),
    )
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn qv(items: &[&str]) -> QVector {
    items.iter().map(|s| q(s)).collect()
}

fn close(x: &[Rational], approx: &[f64]) -> bool {
    x.iter()
        .zip(approx)
        .all(|(a, b)| (a.to_f64().unwrap() - b).abs() < APPROX_TOL)
}

fn hull(points: &[QVector]) -> Polytope {
    Polytope::from_points(points).unwrap()
}

/// Points listed for the linear generalized examples.
struct Listed {
    x1: QVector,
    x2: QVector,
    x3: QVector,
    x5: QVector,
    x7: QVector,
    x8: QVector,
}

fn listed() -> Listed {
    Listed {
        x1: qv(&["0", "0", "0", "0"]),
        x2: qv(&["0", "2", "0", "6"]),
        x3: qv(&["1", "2", "1", "2"]),
        x5: qv(&["0", "2.5", "0.125", "5.5"]),
        x7: qv(&["0", "2.5", "1.5", "0"]),
        x8: qv(&["8/55", "78/55", "0", "6"]),
    }
}

const X4: [f64; 4] = [1.1876, 1.9062, 1.2481, 0.0];
const X6: [f64; 4] = [1.175, 1.9125, 1.5, 0.0];

/// Engine points closest to the published approximations of `x4` and `x6`.
fn approximate_points(points: &[QVector]) -> Result<(QVector, QVector), String> {
    let find = |approx: &[f64], label: &str| {
        let hits: Vec<&QVector> = points.iter().filter(|p| close(p, approx)).collect();
        match hits.as_slice() {
            [one] => Ok((*one).clone()),
            _ => Err(format!(
                "{} engine points within tolerance of {label}",
                hits.len()
            )),
        }
    };
    Ok((find(&X4, "x4")?, find(&X6, "x6")?))
}

fn criterion_1() -> Check {
    let game = load("ex31.json");
    let mut counts = Vec::new();
    for (player, faces, points) in [(1, 3, 7), (2, 4, 9)] {
        let out = cmd_best_response(&game, player, BestResponseSet::Intersection).unwrap();
        let got = (
            out.result.components.len(),
            out.result.extremal_points().len(),
        );
        ensure(
            got == (faces, points),
            format!("player {player}: {got:?} faces/points"),
        )?;
        matches_expected(&out.result, &format!("ex31_best_response_{player}.json"))?;
        counts.push(format!("{}/{}", got.0, got.1));
    }
    let out = cmd_solve(&game, SolveMode::Intersection).unwrap();
    matches_expected(&out.result, "ex31_intersection.json")?;
    let pts = out.result.extremal_points();
    ensure(pts.len() == 6, format!("{} extremal points", pts.len()))?;
    let l = listed();
    for (x, label) in [(&l.x1, "x1"), (&l.x2, "x2"), (&l.x3, "x3"), (&l.x5, "x5")] {
        ensure(pts.contains(x), format!("{label} missing"))?;
    }
    let (x4, x6) = approximate_points(&pts)?;
    let expected = irredundant_union(vec![
        hull(std::slice::from_ref(&l.x1)),
        hull(&[l.x2.clone(), l.x5.clone()]),
        hull(&[l.x3.clone(), l.x5.clone()]),
        hull(&[l.x3.clone(), x6.clone()]),
        hull(&[x4.clone(), x6]),
    ]);
    ensure(
        out.result.polytopes().unwrap() == expected,
        "components differ from P1..P5",
    )?;
    Ok(format!(
        "faces/points {}, P1..P5 matched, x4 = {}",
        counts.join(" and "),
        fmt(&x4)
    ))
}

fn fmt(x: &[Rational]) -> String {
    format!("({})", x.iter().map(|r| r.to_string()).join(", "))
}

fn criterion_2() -> Check {
    let game = load("ex31.json");
    let cap = cmd_solve(&game, SolveMode::Intersection)
        .unwrap()
        .result
        .extremal_points();
    let (x4, _) = approximate_points(&cap)?;
    let out = cmd_solve(&game, SolveMode::Generalized).unwrap();
    matches_expected(&out.result, "ex31_generalized.json")?;
    ensure(
        out.result.exactness.as_deref() == Some("exact"),
        "not exact",
    )?;
    let l = listed();
    let expected = irredundant_union(vec![
        hull(&[l.x1]),
        hull(&[l.x2]),
        hull(&[l.x3]),
        hull(&[x4]),
    ]);
    ensure(
        out.result.polytopes().unwrap() == expected,
        "generalized set differs from {x1..x4}",
    )?;
    let union = cmd_solve(&game, SolveMode::Union).unwrap();
    matches_expected(&union.result, "ex31_union.json")?;
    ensure(
        union.result.components.is_empty(),
        "union mode is not empty",
    )?;
    Ok("generalized = {x1, x2, x3, x4}, union empty".into())
}

fn criterion_3() -> Check {
    let game = load("ex32.json");
    let l = listed();
    let union = cmd_solve(&game, SolveMode::Union).unwrap();
    matches_expected(&union.result, "ex32_union.json")?;
    ensure(
        union.result.polytopes().unwrap() == vec![hull(&[l.x2.clone(), l.x5.clone()])],
        "union differs from co{x2, x5}",
    )?;
    let out = cmd_solve(&game, SolveMode::Generalized).unwrap();
    matches_expected(&out.result, "ex32_generalized.json")?;
    let cap = cmd_solve(&game, SolveMode::Intersection)
        .unwrap()
        .result
        .extremal_points();
    let (x4, _) = approximate_points(&cap)?;
    let expected = irredundant_union(vec![
        hull(std::slice::from_ref(&l.x1)),
        hull(&[l.x2.clone(), l.x5.clone()]),
        hull(&[l.x3.clone(), l.x5.clone()]),
        hull(&[x4]),
    ]);
    ensure(
        out.result.polytopes().unwrap() == expected,
        "generalized set differs from P1 u P2 u P3 u {x4}",
    )?;
    Ok("union = co{x2, x5}, generalized = P1 u P2 u P3 u {x4}".into())
}

fn criterion_4() -> Check {
    let game = load("ex41.json");
    for (player, faces, points) in [(1, 2, 9), (2, 2, 10)] {
        let out = cmd_best_response(&game, player, BestResponseSet::Shared).unwrap();
        let got = (
            out.result.components.len(),
            out.result.extremal_points().len(),
        );
        ensure(
            got == (faces, points),
            format!("player {player}: {got:?} faces/points"),
        )?;
        matches_expected(&out.result, &format!("ex41_best_response_{player}.json"))?;
    }
    let out = cmd_solve(&game, SolveMode::Shared).unwrap();
    matches_expected(&out.result, "ex41_shared.json")?;
    let pts = out.result.extremal_points();
    ensure(pts.len() == 8, format!("{} extremal points", pts.len()))?;
    let l = listed();
    for (x, label) in [
        (&l.x1, "x1"),
        (&l.x2, "x2"),
        (&l.x3, "x3"),
        (&l.x5, "x5"),
        (&l.x7, "x7"),
        (&l.x8, "x8"),
    ] {
        ensure(pts.contains(x), format!("{label} missing"))?;
    }
    let (x4, x6) = approximate_points(&pts)?;
    let expected = irredundant_union(vec![
        hull(&[l.x1, l.x3.clone(), x4.clone(), l.x8.clone()]),
        hull(&[l.x2, l.x3.clone(), l.x5.clone(), l.x8.clone()]),
        hull(&[l.x3.clone(), l.x5, x6.clone(), l.x7]),
        hull(&[l.x3, x4, x6]),
    ]);
    ensure(
        out.result.polytopes().unwrap() == expected,
        "components differ from NE1..NE4",
    )?;
    Ok(format!(
        "faces/points 2/9 and 2/10, NE1..NE4 matched, x8 = {}",
        fmt(&l.x8)
    ))
}

fn criterion_5() -> Check {
    let game = load("ex31.json").linear.unwrap();
    let z1 = QMatrix::from_i64(&[
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0],
        &[1, -1, 0, 0, 0],
        &[0, 0, 1, -1, 0],
        &[0, 0, 0, 0, 1],
        &[0, 0, 0, 0, 0],
    ]);
    let z2 = QMatrix::from_i64(&[
        &[1, -1, 0, 0, 0],
        &[0, 0, 1, -1, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1],
    ]);
    ensure(dual_generators(&game, 0).unwrap().z == z1, "Z1 differs")?;
    ensure(dual_generators(&game, 1).unwrap().z == z2, "Z2 differs")?;
    Ok("Z1 and Z2 equal the displayed 6x5 matrices".into())
}

fn criterion_6() -> Check {
    let step = "1/4";
    let odd = cmd_oracle(&load("odds_evens.json"), step).unwrap();
    matches_expected(&odd.result, "odds_evens_oracle.json")?;
    ensure(
        odd.result.extremal_points() == vec![qv(&["1/2", "1/2"])],
        "odds and evens set differs",
    )?;
    let three = cmd_oracle(&load("ex22.json"), step).unwrap();
    matches_expected(&three.result, "ex22_oracle.json")?;
    ensure(
        three.result.extremal_points()
            == vec![qv(&["0", "0"]), qv(&["1/2", "1/2"]), qv(&["1", "1"])],
        "three-equilibria set differs",
    )?;
    Ok("{(1/2,1/2)} and {(0,0),(1/2,1/2),(1,1)}".into())
}

fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    int(rng.gen_range(lo..=hi))
}

/// `[0, 2]^dim` cut by random rows `a x <= b` with `b >= 0`.
fn random_polyhedron(rng: &mut ChaCha8Rng, dim: usize, max_rows: usize) -> HPolyhedron {
    let mut h = HPolyhedron::from_box(&vec![(int(0), int(2)); dim]);
    for _ in 0..rng.gen_range(0..=max_rows) {
        let a = (0..dim).map(|_| small_int(rng, -3, 3)).collect();
        h.push(Constraint::le(a, small_int(rng, 0, 5))).unwrap();
    }
    h
}

fn brute_force_vertices(h: &HPolyhedron) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::new();
    for rows in h.rows().iter().combinations(h.dim()) {
        let a: Vec<QVector> = rows.iter().map(|r| r.coeffs.clone()).collect();
        let b: QVector = rows.iter().map(|r| r.rhs.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if h.contains(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}

fn random_combo(rng: &mut ChaCha8Rng, pts: &[QVector]) -> QVector {
    let w: Vec<Rational> = pts.iter().map(|_| small_int(rng, 0, 6)).collect();
    let total: Rational = w.iter().sum();
    if total.is_zero() {
        return pts[0].clone();
    }
    let mut out = vec![Rational::zero(); pts[0].len()];
    for (p, wk) in pts.iter().zip(&w) {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x * wk;
        }
    }
    out.into_iter().map(|x| x / &total).collect()
}

/// `v` is efficient iff the image hull below `Gv` is the single point `Gv`.
fn image_hull_efficient(g: &QMatrix, verts: &[QVector], v: &[Rational]) -> bool {
    let image: Vec<QVector> = verts.iter().map(|p| g.mul_vec(p)).collect();
    let target = g.mul_vec(v);
    let mut h = hull(&image).hrep().clone();
    for (k, t) in target.iter().enumerate() {
        let mut e = vec![Rational::zero(); target.len()];
        e[k] = int(1);
        h.push(Constraint::le(e, t.clone())).unwrap();
    }
    Polytope::from_hrep(&h)
        .unwrap()
        .is_some_and(|p| p.vertices() == [target])
}

/// Every vertex, edge midpoint and interior point of each part of `a` lies
/// in some part of `b`.
fn covered(a: &[Polytope], b: &[Polytope]) -> bool {
    let inside = |x: &QVector| b.iter().any(|q| q.contains(x));
    a.iter().all(|p| {
        let mids = p.vertices().iter().tuple_combinations().map(|(u, w)| {
            u.iter()
                .zip(w)
                .map(|(s, t)| (s + t) / int(2))
                .collect::<QVector>()
        });
        p.vertices().iter().all(inside)
            && inside(&relative_interior_point(p))
            && mids.into_iter().all(|m| inside(&m))
    })
}

fn random_cost(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> QMatrix {
    QMatrix::from_rows(vec![(0..n).map(|_| small_int(rng, lo, hi)).collect()], n).unwrap()
}

fn random_generalized(rng: &mut ChaCha8Rng) -> LinearGame {
    let extra = rng.gen_range(0..=6usize);
    let split = rng.gen_range(0..=extra);
    let mut sets = vec![HPolyhedron::whole_space(4), HPolyhedron::whole_space(4)];
    for k in 0..extra {
        let a = (0..4).map(|_| small_int(rng, -3, 3)).collect();
        sets[usize::from(k >= split)]
            .push(Constraint::le(a, small_int(rng, 0, 5)))
            .unwrap();
    }
    LinearGame::new(
        vec![
            Player::new(2, random_cost(rng, 4, -3, 3)),
            Player::new(2, random_cost(rng, 4, -3, 3)),
        ],
        Constraints::PerPlayer(sets),
        vec![(int(0), int(2)); 4],
    )
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tally = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, tally: &mut Vec<String>| {
        tally.push(format!("{name} {:.1}s", clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    for k in 0..PROPERTY_INSTANCES {
        let dim = rng.gen_range(2..=3);
        let h = random_polyhedron(&mut rng, dim, 5);
        let v = dd_hrep_to_vrep(&h).unwrap();
        ensure(
            v.vertices == brute_force_vertices(&h),
            format!("dd vertices, instance {k}"),
        )?;
        let p = hull(&v.vertices);
        ensure(
            dd_hrep_to_vrep(p.hrep()).unwrap().vertices == v.vertices,
            format!("hull round trip, instance {k}"),
        )?;
    }
    lap("dd/hull", &mut tally);

    for k in 0..PROPERTY_INSTANCES {
        let dim = rng.gen_range(2..=3);
        let h = random_polyhedron(&mut rng, dim, 5);
        let c: QVector = (0..dim).map(|_| small_int(&mut rng, -4, 4)).collect();
        let sol = solve_lp(&LpProblem::new(c.clone(), h.clone()).unwrap()).unwrap();
        let best = brute_force_vertices(&h)
            .iter()
            .map(|v| dot(&c, v))
            .min()
            .unwrap();
        ensure(
            sol.is_optimal() && sol.value == best,
            format!("simplex optimum, instance {k}"),
        )?;
    }
    lap("simplex", &mut tally);

    for k in 0..PROPERTY_INSTANCES {
        let dim = rng.gen_range(2..=3);
        let h = random_polyhedron(&mut rng, dim, 4);
        let x = Polytope::from_hrep(&h).unwrap().unwrap();
        let m = rng.gen_range(1..=3);
        let g = QMatrix::from_rows(
            (0..m)
                .map(|_| (0..dim).map(|_| small_int(&mut rng, -3, 3)).collect())
                .collect(),
            dim,
        )
        .unwrap();
        let mut probes = x.vertices().to_vec();
        probes.extend((0..3).map(|_| random_combo(&mut rng, x.vertices())));
        for v in &probes {
            let verdict = efficiency_test(v, &g, &h).unwrap();
            ensure(
                verdict.efficient == image_hull_efficient(&g, x.vertices(), v),
                format!("efficiency, instance {k}"),
            )?;
        }
    }
    lap("efficiency", &mut tally);

    for k in 0..PROPERTY_INSTANCES {
        let h = random_polyhedron(&mut rng, 3, 4);
        let own: Vec<usize> = if rng.gen_bool(0.5) {
            vec![0]
        } else {
            vec![0, 1]
        };
        let params: Vec<usize> = (0..3).filter(|j| !own.contains(j)).collect();
        let domain = Polytope::from_hrep(&h).unwrap().unwrap().project(&params);
        let c: QVector = (0..3).map(|_| small_int(&mut rng, -3, 3)).collect();
        let regions = parametric_lp(&c, &h, &own, &domain).unwrap();
        let c_own: QVector = own.iter().map(|&j| c[j].clone()).collect();
        let c_par: QVector = params.iter().map(|&j| c[j].clone()).collect();
        for _ in 0..PARAMETRIC_SAMPLES {
            let theta = random_combo(&mut rng, domain.vertices());
            let fixed: Vec<(usize, Rational)> =
                params.iter().copied().zip(theta.iter().cloned()).collect();
            let s = solve_lp(&LpProblem::new(c_own.clone(), h.slice(&fixed)).unwrap()).unwrap();
            let pointwise = s.value + dot(&c_par, &theta);
            ensure(
                evaluate_regions(&regions, &theta) == Some(pointwise),
                format!("parametric value, instance {k}"),
            )?;
        }
    }
    lap("parametric", &mut tally);

    for k in 0..PROPERTY_INSTANCES {
        let g = random_generalized(&mut rng);
        let sub = union_subset(&g).unwrap();
        let (exact, _) = generalized_ne(&g).unwrap();
        let sup = intersection_superset(&g).unwrap();
        ensure(
            covered(&sub.components, &exact.components),
            format!("subset bound, instance {k}"),
        )?;
        ensure(
            covered(&exact.components, &sup.components),
            format!("superset bound, instance {k}"),
        )?;
    }
    lap("sandwich", &mut tally);

    for k in 0..PROPERTY_INSTANCES {
        let mut g = random_generalized(&mut rng);
        g.constraints = Constraints::Shared(g.intersection_hrep().unwrap());
        let player = rng.gen_range(0..2);
        let factor = frac(rng.gen_range(1..=9), rng.gen_range(1..=4));
        let base = shared_constraint_ne(&g).unwrap();
        let scaled = shared_constraint_ne(&g.with_scaled_cost(player, &factor)).unwrap();
        ensure(
            base.components == scaled.components,
            format!("scaling, instance {k}"),
        )?;
    }
    lap("scaling", &mut tally);

    Ok(format!(
        "{} x {PROPERTY_INSTANCES} instances: {}",
        tally.len(),
        tally.join(", ")
    ))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let layout = StrategyLayout::new(&[1, 1]);
    let boxes = vec![(int(0), int(3)), (int(0), int(3))];
    let mut accepted_total = 0;
    for k in 0..CROSS_GAMES {
        let mut h = HPolyhedron::whole_space(2);
        for _ in 0..rng.gen_range(0..=3) {
            let a = (0..2).map(|_| small_int(&mut rng, -1, 1)).collect();
            h.push(Constraint::le(a, small_int(&mut rng, 0, 4)))
                .unwrap();
        }
        let costs = [
            random_cost(&mut rng, 2, -1, 1),
            random_cost(&mut rng, 2, -1, 1),
        ];
        let game = LinearGame::new(
            vec![
                Player::new(1, costs[0].clone()),
                Player::new(1, costs[1].clone()),
            ],
            Constraints::Shared(h.clone()),
            boxes.clone(),
        );
        let ne = shared_constraint_ne(&game).unwrap();
        let oracle = OracleGame::new(
            &[1, 1],
            costs
                .iter()
                .map(|c| CostExpr::from_linear(c.row(0), &layout))
                .collect(),
            boxes.clone(),
            OracleConstraint::Shared(h.clone()),
        )
        .unwrap();
        let grid = GridSpec::uniform(int(1), 2);
        let accepted = oracle.grid_nash(&grid).unwrap();
        let feasible = game.constraint_set(0).unwrap();
        let engine: Vec<QVector> = (0..=3)
            .cartesian_product(0..=3)
            .map(|(a, b)| vec![int(a), int(b)])
            .filter(|x| feasible.contains(x) && ne.contains(x))
            .collect();
        ensure(
            accepted == engine,
            format!("game {k}: oracle {accepted:?} vs engine {engine:?}"),
        )?;
        accepted_total += accepted.len();
    }
    Ok(format!(
        "{CROSS_GAMES} games agree on {accepted_total} grid equilibria"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("intersection game of the first linear example", criterion_1),
        (
            "generalized and union solves of the first linear example",
            criterion_2,
        ),
        (
            "union and generalized solves of the second linear example",
            criterion_3,
        ),
        ("vector-valued shared game", criterion_4),
        ("dual generator matrices", criterion_5),
        ("grid oracle on the bilinear examples", criterion_6),
        ("randomized property suites", criterion_7),
        ("oracle and engine cross-validation", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
