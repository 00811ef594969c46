//! Acceptance suite: one line per criterion, exact arithmetic throughout.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use fischer_core::decomp::{
    build_summand_basis, harmonic_refinement, verify_decomposition, verify_scalar_decomposition,
    Decomposer, JOrder, Pipeline,
};
use fischer_core::exactla::matrix::{is_positive_definite, leading_minors};
use fischer_core::exactla::subspace::gram;
use fischer_core::operators::{adjointness_reports, relation_suite, RelationConfig};
use fischer_core::poly::binomial;
use fischer_core::repdim::{
    gl_dim_int, graded_dim_identities, klimyk_spinor_tensor, partitions_bounded, pieri_wedge,
    subsets_of_size, weyl_dim_so, HalfInt,
};
use fischer_core::spaces::random_element;
use fischer_core::{
    apply_generator, fischer_inner, ClPoly, ExactScalar, GeneratorTag, GradedSlice, SubspaceBasis,
    ValueKind, Workspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: [(usize, usize, u32); 5] = [(3, 1, 5), (4, 1, 4), (4, 2, 3), (5, 2, 2), (6, 3, 2)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome {
            pass: true,
            detail: summary,
        },
        Some(f) => Outcome {
            pass: false,
            detail: format!("{} failure(s), first: {f}", failures.len()),
        },
    }
}

struct Grid {
    spaces: Vec<(Workspace, u32)>,
}

impl Grid {
    fn new() -> Self {
        Grid {
            spaces: GRID
                .iter()
                .map(|&(m, k, l)| (Workspace::new(m, k).unwrap(), l))
                .collect(),
        }
    }

    fn cells(&self) -> impl Iterator<Item = (&Workspace, u32)> {
        self.spaces
            .iter()
            .flat_map(|(ws, top)| (0..=*top).map(move |l| (ws, l)))
    }
}

fn cell(ws: &Workspace, l: u32) -> String {
    format!("(m={}, k={}, l={l})", ws.m(), ws.k())
}

fn random_combination(space: &SubspaceBasis, rng: &mut impl Rng) -> ClPoly {
    let mut out = ClPoly::zero(space.chart().m(), space.chart().k());
    for e in space.elements() {
        let c = ExactScalar::gaussian(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        out = out.add(&e.scalar_mul(&c)).unwrap();
    }
    out
}

fn is_annihilated_by(p: &ClPoly, tags: &[GeneratorTag]) -> bool {
    tags.iter()
        .all(|&t| apply_generator(t, p).unwrap().is_zero())
}

fn diracs(k: usize) -> Vec<GeneratorTag> {
    (1..=k).map(GeneratorTag::Dirac).collect()
}

fn laplacians(k: usize) -> Vec<GeneratorTag> {
    (1..=k)
        .flat_map(|i| (i..=k).map(move |j| GeneratorTag::Lapl(i, j)))
        .collect()
}

fn direct_sum_and_span(grid: &Grid) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (ws, l) in grid.cells() {
        let r = verify_decomposition(ws, l, JOrder::Increasing, false).unwrap();
        let expected = binomial(
            (l as usize + ws.m() * ws.k() - 1) as u64,
            (ws.m() * ws.k() - 1) as u64,
        ) as usize
            * (1 << (ws.m() / 2));
        checked += 1;
        if !r.pass || r.ambient_dim != expected || r.total_dim != expected || r.rank != expected {
            failures.push(format!(
                "{}: rank {} of {} offered, ambient {expected}",
                cell(ws, l),
                r.rank,
                r.total_dim
            ));
        }
    }
    // Second route in one chart for the whole degree: summand bases in the total-degree slice.
    for (m, k, l) in [(3, 1, 3), (4, 2, 2)] {
        let ws = Workspace::new(m, k).unwrap();
        let parts: Vec<SubspaceBasis> = fischer_core::enumerate_summands(k, l)
            .iter()
            .map(|s| build_summand_basis(&ws, s, JOrder::Decreasing).unwrap())
            .collect();
        let ambient = ws
            .chart(GradedSlice::Total(l), ValueKind::Spinor)
            .unwrap()
            .dim();
        if !fischer_core::exactla::is_direct_sum(&parts, Some(ambient))
            .unwrap()
            .pass
        {
            failures.push(format!("total-chart route {}", cell(&ws, l)));
        }
    }
    outcome(&failures, format!("{checked} cells direct and spanning"))
}

fn decompose_reassemble(grid: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut failures = Vec::new();
    let mut count = 0;
    for (ws, l) in grid.cells() {
        let dec = Decomposer::new(ws, l, Pipeline::Monogenic, JOrder::Increasing, false).unwrap();
        let chart = ws.chart(GradedSlice::Total(l), ValueKind::Spinor).unwrap();
        let k = ws.k();
        for trial in 0..100 {
            let p = random_element(&chart, &mut rng);
            let r = dec.decompose(&p).unwrap();
            count += 1;
            let monogenic = r
                .components
                .iter()
                .all(|c| is_annihilated_by(&c.base, &diracs(k)));
            if !r.residual.is_zero()
                || r.reassemble().unwrap() != p
                || !monogenic
                || r.warning.is_some()
            {
                failures.push(format!("{} trial {trial}", cell(ws, l)));
            }
        }
    }
    outcome(
        &failures,
        format!("{count} random polynomials reassembled with zero residual"),
    )
}

fn relations() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut constants = BTreeMap::new();
    for k in 1..=3 {
        for m in 4..=6 {
            let r = relation_suite(&RelationConfig::new(m, k, 3)).unwrap();
            for rel in &r.relations {
                count += 1;
                if !rel.pass {
                    failures.push(format!("m={m} k={k} {}", rel.relation));
                }
                if k == 2 && m == 4 && !rel.constant_found.is_empty() {
                    constants.insert(rel.relation.clone(), rel.constant_found.len());
                }
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{count} brackets hold on degree <= 3 ({} nonzero at k=2)",
            constants.len()
        ),
    )
}

fn dimension_identities(grid: &Grid) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for (ws, l) in grid.cells() {
        let r = graded_dim_identities(ws, l, false).unwrap();
        for c in &r.checks {
            count += 1;
            if !c.pass {
                failures.push(format!(
                    "{} {}: {} != {}",
                    cell(ws, l),
                    c.name,
                    c.lhs,
                    c.rhs
                ));
            }
        }
    }
    outcome(&failures, format!("{count} identities exact"))
}

fn random_dominant(m: usize, rng: &mut impl Rng) -> Vec<HalfInt> {
    let n = m / 2;
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    if m.is_multiple_of(2) && rng.gen_bool(0.5) {
        v[n - 1] = -v[n - 1];
    }
    v.into_iter().map(HalfInt::int).collect()
}

fn klimyk() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut failures = Vec::new();
    let mut half_failures = 0;
    let mut count = 0;
    for m in 4..=7 {
        let n = m / 2;
        for _ in 0..50 {
            let lambda = random_dominant(m, &mut rng);
            let summands = klimyk_spinor_tensor(m, &lambda).unwrap();
            let lhs: u128 = summands.iter().map(|s| s.dim).sum();
            let rhs = weyl_dim_so(m, &lambda).unwrap() << n;
            let support = lambda.iter().filter(|x| x.twice() != 0).count();
            let halves_ok = m % 2 == 1
                || [
                    fischer_core::Chirality::Plus,
                    fischer_core::Chirality::Minus,
                ]
                .iter()
                .all(|c| {
                    summands.iter().filter(|s| s.chirality == Some(*c)).count() <= 1 << support
                });
            count += 1;
            if !halves_ok {
                half_failures += 1;
            }
            if lhs != rhs || summands.len() > 1 << support {
                failures.push(format!(
                    "m={m} lambda=({}): {} summands > 2^{support}, dims {lhs} vs {rhs}",
                    lambda
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    summands.len()
                ));
            }
        }
    }
    if !failures.is_empty() {
        failures[0].push_str(&format!(
            "; per half-spinor bound violated in {half_failures} cases"
        ));
    }
    outcome(&failures, format!("{count} random weights"))
}

/// Semistandard tableaux of shape `a` with entries in `1..=k`, counted directly.
fn count_ssyt(a: &[u32], k: usize) -> u128 {
    let cells: Vec<(usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    fn rec(
        i: usize,
        cells: &[(usize, usize)],
        fill: &mut BTreeMap<(usize, usize), usize>,
        k: usize,
    ) -> u128 {
        let Some(&(r, c)) = cells.get(i) else {
            return 1;
        };
        let lo_row = if c > 0 { fill[&(r, c - 1)] } else { 1 };
        let lo_col = if r > 0 { fill[&(r - 1, c)] + 1 } else { 1 };
        let mut total = 0;
        for v in lo_row.max(lo_col)..=k {
            fill.insert((r, c), v);
            total += rec(i + 1, cells, fill, k);
        }
        fill.remove(&(r, c));
        total
    }
    rec(0, &cells, &mut BTreeMap::new(), k)
}

fn pieri() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let gl = |a: &[u32]| gl_dim_int(&a.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap();
    for k in 1..=4 {
        for a in partitions_bounded(k, 3) {
            if gl(&a) != count_ssyt(&a, k) {
                failures.push(format!("gl dim of {a:?} disagrees with tableau count"));
            }
            for j in 0..=k {
                let lhs = binomial(k as u64, j as u64) * gl(&a);
                let rhs: u128 = pieri_wedge(k, j, &a).unwrap().iter().map(|b| gl(b)).sum();
                let oracle: u128 = subsets_of_size(k, j)
                    .iter()
                    .map(|set| {
                        let mut b = a.clone();
                        for &i in set {
                            b[i - 1] += 1;
                        }
                        if b.windows(2).all(|w| w[0] >= w[1]) {
                            count_ssyt(&b, k)
                        } else {
                            0
                        }
                    })
                    .sum();
                count += 1;
                if lhs != rhs || rhs != oracle {
                    failures.push(format!("k={k} j={j} a={a:?}: {lhs} vs {rhs} vs {oracle}"));
                }
            }
        }
    }
    outcome(&failures, format!("{count} (k, j, a) cases"))
}

fn fischer_form(grid: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut failures = Vec::new();
    for (ws, l) in grid.cells() {
        let chart = ws.chart(GradedSlice::Total(l), ValueKind::Spinor).unwrap();
        let full = SubspaceBasis::full(chart.clone());
        let g = full.gram();
        if !g.is_hermitian() || !is_positive_definite(&g) {
            failures.push(format!("{} chart Gram", cell(ws, l)));
        }
        let samples: Vec<ClPoly> = (0..chart.dim().min(4))
            .map(|_| random_element(&chart, &mut rng))
            .collect();
        let g = gram(&samples).unwrap();
        let minors_positive = leading_minors(&g)
            .iter()
            .all(|d| d.is_real() && d.re.is_positive());
        if !g.is_hermitian() || !minors_positive {
            failures.push(format!("{} random Gram", cell(ws, l)));
        }
        for p in &samples {
            for q in &samples {
                let pq = fischer_inner(p, q).unwrap();
                let qp = fischer_inner(q, p).unwrap();
                let coords =
                    chart.fischer(&chart.to_coords(p).unwrap(), &chart.to_coords(q).unwrap());
                if pq != qp.conj() || pq != coords {
                    failures.push(format!("{} Hermitian symmetry", cell(ws, l)));
                }
            }
        }
    }
    for (ws, top) in &grid.spaces {
        for r in adjointness_reports(ws.m(), ws.k(), *top).unwrap() {
            let expected = if r.operator.starts_with("VECMUL") {
                "-1"
            } else {
                "1"
            };
            if !r.pass || r.constant.as_deref().is_some_and(|c| c != expected) {
                failures.push(format!(
                    "m={} k={} {} vs {} at degree {}",
                    ws.m(),
                    ws.k(),
                    r.operator,
                    r.adjoint,
                    r.degree
                ));
            }
        }
    }
    outcome(
        &failures,
        "Hermitian, positive definite, adjoint signs -1 (ux_j) and +1 (r^2_ij)".into(),
    )
}

fn projections(grid: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut failures = Vec::new();
    let mut count = 0;
    for (ws, l) in grid.cells() {
        let k = ws.k();
        let spinor = ws.chart(GradedSlice::Total(l), ValueKind::Spinor).unwrap();
        let scalar = ws.chart(GradedSlice::Total(l), ValueKind::Scalar).unwrap();
        let cases: [(&_, bool); 3] = [(&spinor, true), (&spinor, false), (&scalar, true)];
        for (chart, harmonic) in cases {
            let space = if harmonic {
                ws.harmonic_space(GradedSlice::Total(l), chart.kind())
                    .unwrap()
            } else {
                ws.monogenic_space(GradedSlice::Total(l)).unwrap()
            };
            let annihilators = if harmonic { laplacians(k) } else { diracs(k) };
            for _ in 0..3 {
                let p = random_element(chart, &mut rng);
                let proj = |x: &ClPoly| {
                    if harmonic {
                        ws.harmonic_projection(x)
                    } else {
                        ws.monogenic_projection(x)
                    }
                    .unwrap()
                };
                let q = proj(&p);
                let rest = p.sub(&q).unwrap();
                let rest_coords = chart.to_coords(&rest).unwrap();
                let mut ok = proj(&q) == q && is_annihilated_by(&q, &annihilators);
                ok &= space
                    .vectors()
                    .iter()
                    .all(|v| chart.fischer(v, &rest_coords).is_zero());
                for _ in 0..2 {
                    let h = random_combination(&space, &mut rng);
                    ok &= fischer_inner(&h, &rest).unwrap().is_zero();
                }
                count += 1;
                if !ok {
                    let what = if harmonic { "harmonic" } else { "monogenic" };
                    failures.push(format!("{} {what} {:?}", cell(ws, l), chart.kind()));
                }
            }
        }
    }
    outcome(
        &failures,
        format!("{count} random projections idempotent and orthogonal"),
    )
}

fn refinement(grid: &Grid) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for (ws, l) in grid.cells() {
        let r = harmonic_refinement(ws, l, false).unwrap();
        count += 1;
        if !r.pass {
            failures.push(format!(
                "{}: rank {} of {}",
                cell(ws, l),
                r.rank,
                r.harmonic_dim
            ));
        }
    }
    outcome(&failures, format!("{count} cells"))
}

fn scalar_regression(grid: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut failures = Vec::new();
    let mut count = 0;
    for (ws, l) in grid.cells() {
        let r = verify_scalar_decomposition(ws, l, false).unwrap();
        let expected = binomial(
            (l as usize + ws.m() * ws.k() - 1) as u64,
            (ws.m() * ws.k() - 1) as u64,
        ) as usize;
        count += 1;
        if !r.pass || r.ambient_dim != expected || r.summands.iter().any(|s| !s.j.is_empty()) {
            failures.push(format!("{}: rank {} of {expected}", cell(ws, l), r.rank));
        }
        let dec =
            Decomposer::new(ws, l, Pipeline::ScalarHarmonic, JOrder::Increasing, false).unwrap();
        let chart = ws.chart(GradedSlice::Total(l), ValueKind::Scalar).unwrap();
        for _ in 0..5 {
            let p = random_element(&chart, &mut rng);
            let d = dec.decompose(&p).unwrap();
            let harmonic = d
                .components
                .iter()
                .all(|c| is_annihilated_by(&c.base, &laplacians(ws.k())));
            if !d.residual.is_zero() || d.reassemble().unwrap() != p || !harmonic {
                failures.push(format!("{} scalar decomposition", cell(ws, l)));
            }
        }
    }
    outcome(&failures, format!("{count} cells direct and spanning"))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let grid = Grid::new();
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1 monogenic Fischer decomposition",
            Box::new(|| direct_sum_and_span(&grid)),
        ),
        (
            "2 decompose/reassemble",
            Box::new(|| decompose_reassemble(&grid)),
        ),
        ("3 superalgebra relations", Box::new(relations)),
        (
            "4 dimension identities",
            Box::new(|| dimension_identities(&grid)),
        ),
        ("5 spinor tensor rule", Box::new(klimyk)),
        ("6 Pieri rule", Box::new(pieri)),
        ("7 Fischer form", Box::new(|| fischer_form(&grid))),
        ("8 projection laws", Box::new(|| projections(&grid))),
        ("9 harmonic refinement", Box::new(|| refinement(&grid))),
        (
            "10 scalar regression",
            Box::new(|| scalar_regression(&grid)),
        ),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "[{}] criterion {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
