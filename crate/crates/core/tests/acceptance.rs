//! Acceptance criteria, one line each. Run with
//! `cargo test --test acceptance -- --nocapture` to see the table.

mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unimod::boxpoints::{box_points, BoxOracle};
use unimod::cayley::{gamma_family, gamma_normal_form, CayleyElt};
use unimod::classic::{dice, pulling_triangulation, Hyperplane};
use unimod::complexes::{Cell, CellComplex};
use unimod::geometry::{OrderedSimplex, Polytope, RatPolytope};
use unimod::ivec;
use unimod::kmw::{index_profile, kmw_pipeline, KmwOptions};
use unimod::lattice::IntVector;
use unimod::mixed::{delta_family, main_pipeline, semigroup_threshold, DElt, MixedOptions};
use unimod::rewrite::{check_facial_compatibility, check_local_confluence, HarnessOptions, NormalizeOptions, Strategy};
use unimod::sampling::{random_cayley, random_dims, random_mixed_cell, random_tuple, CellShape};
use unimod::verify::{simplex_cells, verify_mixed_support, verify_triangulation, verify_unimodular, ViolationClass};

const SEED: u64 = 20_240_601;

/// Largest share of inconclusive join searches, in percent.
const MAX_INCONCLUSIVE_PERCENT: usize = 5;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn unit_simplex(d: usize) -> OrderedSimplex {
    let mut v = vec![IntVector::zero(d)];
    v.extend((0..d).map(|i| IntVector::unit(d, i)));
    OrderedSimplex::new(v).unwrap()
}

fn tri3() -> Polytope {
    Polytope::new(&[ivec![0, 0], ivec![2, 1], ivec![1, 2]]).unwrap()
}

fn reeve() -> Polytope {
    Polytope::new(&[ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 2]]).unwrap()
}

fn det() -> NormalizeOptions {
    NormalizeOptions::default()
}

fn gamma_counts() -> Outcome {
    let mut cases = 0;
    for d in 1..=3 {
        for c in 1..=4u64 {
            let cells = gamma_normal_form(&CayleyElt::dilated_simplex(unit_simplex(d), c), det()).map_err(|e| e.to_string())?;
            check(cells.len() as u64 == c.pow(d as u32), || format!("d = {d}, c = {c}: {} cells", cells.len()))?;
            check(cells.iter().all(|b| b.lattice().index().is_one()), || format!("d = {d}, c = {c}: a cell is not unimodular"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases, c^d cells each, all unimodular"))
}

fn strategy_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let total = 200;
    let mut cells = 0;
    let mut moved = 0;
    for k in 0..total {
        let e = random_cayley(&mut rng, CellShape::default());
        let a = gamma_normal_form(&e, det()).map_err(|err| err.to_string())?;
        let b = gamma_normal_form(&e, NormalizeOptions { strategy: Strategy::Random(SEED + k), ..det() }).map_err(|err| err.to_string())?;
        check(a == b, || format!("normal forms of {e:?} differ"))?;
        cells += a.len();
        moved += usize::from(a.len() > 1);
    }
    Ok(format!("{total}/{total} agree ({moved} subdivided, {cells} terminal cells)"))
}

fn restriction_commutes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let total = 100;
    let mut faces = 0;
    for _ in 0..total {
        let e = random_cayley(&mut rng, CellShape::default());
        let whole = CellComplex::closure(gamma_normal_form(&e, det()).map_err(|err| err.to_string())?).map_err(|err| err.to_string())?;
        for y in e.faces() {
            let restricted: BTreeSet<CayleyElt> = whole.restriction(&y).maximal().into_iter().collect();
            let direct = gamma_normal_form(&y, det()).map_err(|err| err.to_string())?;
            check(restricted == direct, || format!("face {y:?} of {e:?}"))?;
            faces += 1;
        }
    }
    Ok(format!("{total} cells, {faces} faces, all equal"))
}

fn pulling_and_dicing() -> Outcome {
    let mut cube = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cube.push(ivec![x, y, z]);
            }
        }
    }
    let tets = pulling_triangulation(&cube, det()).map_err(|e| e.to_string())?;
    check(tets.len() == 6, || format!("{} tetrahedra", tets.len()))?;
    check(tets.iter().all(|t| t.index().is_one()), || "a tetrahedron is not unimodular".into())?;
    let square = Polytope::new(&[ivec![0, 0], ivec![2, 0], ivec![0, 2], ivec![2, 2]]).unwrap().to_rat();
    let cuts = [Hyperplane::new(ivec![1, 0], 1.into()).unwrap(), Hyperplane::new(ivec![0, 1], 1.into()).unwrap()];
    let cells: BTreeSet<RatPolytope> = dice(&square, &cuts, det()).map_err(|e| e.to_string())?.into_iter().collect();
    let want: BTreeSet<RatPolytope> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| Polytope::new(&[ivec![x, y], ivec![x + 1, y], ivec![x, y + 1], ivec![x + 1, y + 1]]).unwrap().to_rat())
        .collect();
    check(cells == want, || format!("dicing gave {cells:?}"))?;
    Ok("6 unimodular tetrahedra; 4 unit squares".into())
}

fn kmw_triangle() -> Outcome {
    let p = tri3();
    let res = kmw_pipeline(&p, KmwOptions::default()).map_err(|e| e.to_string())?;
    let n = res.n() as u32;
    check(res.dilation == BigInt::from(2).pow(n), || format!("dilation {}", res.dilation))?;
    let want = 3 * 4usize.pow(n);
    check(res.triangulation.len() == want, || format!("{} cells, expected {want}", res.triangulation.len()))?;
    let cells = simplex_cells(&res.triangulation);
    let report = verify_triangulation(&p.dilate(&res.dilation), &cells).merge(verify_unimodular(&cells));
    check(report.passed(), || format!("verifier: {:?}", report.classes()))?;
    Ok(format!("N = {n}, {want} unimodular cells of {}P verified", res.dilation))
}

fn kmw_reeve() -> Outcome {
    let res = kmw_pipeline(&reeve(), KmwOptions { min_rounds: 1, ..KmwOptions::default() }).map_err(|e| e.to_string())?;
    let before = index_profile(&res.initial_lattices)[0].0.clone();
    let after = index_profile(&res.rounds[0].lattices)[0].0.clone();
    check(before == BigInt::from(2) && after.is_one(), || format!("largest index {before} -> {after}"))?;
    Ok(format!("largest index {before} -> {after} after one round ({} cells)", res.rounds[0].cells))
}

fn representable(m: &BigInt, a: &BigInt, b: &BigInt) -> bool {
    let mut r = BigInt::from(0);
    while &(&r * a) <= m {
        if ((m - &r * a) % b) == BigInt::from(0) {
            return true;
        }
        r += 1;
    }
    false
}

fn main_pipeline_family() -> Outcome {
    let p = tri3();
    let res = main_pipeline(&p, MixedOptions { c: Some(5), ..MixedOptions::default() }).map_err(|e| e.to_string())?;
    let (cn, fnn) = (res.c_power(), res.factorial_power());
    check(cn == BigInt::from(5).pow(res.n() as u32) && fnn == BigInt::from(2).pow(res.n() as u32), || "wrong powers".into())?;
    let report = verify_mixed_support(&res.cells, &[p.dilate(&cn), p.dilate(&fnn)]);
    check(report.passed(), || format!("mixed subdivision: {:?}", report.classes()))?;
    let mut sizes = Vec::new();
    for (r, s) in [(1u64, 0u64), (0, 1), (1, 1), (2, 1)] {
        let m = res.dilation(r, s);
        let tri = res.triangulation(r, s, det()).map_err(|e| e.to_string())?;
        let want = (BigInt::from(3) * &m * &m).to_usize().unwrap();
        check(tri.len() == want, || format!("({r}, {s}): {} cells, expected {want}", tri.len()))?;
        let cells = simplex_cells(&tri);
        let report = verify_triangulation(&p.dilate(&m), &cells).merge(verify_unimodular(&cells));
        check(report.passed(), || format!("({r}, {s}): {:?}", report.classes()))?;
        sizes.push(format!("{m}P"));
    }
    let threshold = semigroup_threshold(&cn, &fnn).map_err(|e| e.to_string())?;
    check(threshold == res.threshold().map_err(|e| e.to_string())?, || "threshold differs".into())?;
    // every m from the threshold on is representable, the one before is not
    let mut m = BigInt::from(0);
    let top = &threshold + 10;
    while m <= top {
        let ok = representable(&m, &cn, &fnn);
        check(ok || m < threshold, || format!("{m} is not representable"))?;
        m += 1;
    }
    check(threshold.is_one() || !representable(&(&threshold - 1), &cn, &fnn), || "threshold is not sharp".into())?;
    Ok(format!("N = {}, verified {}, threshold {threshold}", res.n(), sizes.join(" ")))
}

fn rule_family_health() -> Outcome {
    let opts = HarnessOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let samples: Vec<CayleyElt> = (0..100).map(|_| random_cayley(&mut rng, CellShape::default())).collect();
    let fam = gamma_family();
    let mut gamma = check_local_confluence(&fam, &samples, opts);
    gamma.merge(check_facial_compatibility(&fam, &samples, opts));
    check(gamma.failures.is_empty(), || format!("gamma: {:?}", &gamma.failures[..1]))?;
    check(gamma.inconclusive_below(MAX_INCONCLUSIVE_PERCENT), || format!("gamma: {} of {} inconclusive", gamma.inconclusive, gamma.checked))?;

    // cells of the domain of a class of their own lattice
    let mut mixed = None;
    let mut count = 0;
    while count < 100 {
        let steps = rng.gen_range(0..6);
        let (e, class) = random_mixed_cell(&mut rng, 2, 4, steps);
        if class.as_ref().is_none_or(|x| x.lattice() != &e.lattice()) {
            continue;
        }
        let fam = delta_family(BoxOracle::new(class));
        let mut r = check_local_confluence(&fam, std::slice::from_ref(&e), opts);
        r.merge(check_facial_compatibility(&fam, &[e], opts));
        match mixed.as_mut() {
            None => mixed = Some(r),
            Some(m) => m.merge(r),
        }
        count += 1;
    }
    let mixed = mixed.expect("samples");
    check(mixed.failures.is_empty(), || format!("mixed: {:?}", &mixed.failures[..1]))?;
    check(mixed.inconclusive_below(MAX_INCONCLUSIVE_PERCENT), || format!("mixed: {} of {} inconclusive", mixed.inconclusive, mixed.checked))?;
    Ok(format!(
        "gamma {} checks ({} inconclusive), mixed {} checks ({} inconclusive), no failures",
        gamma.checked, gamma.inconclusive, mixed.checked, mixed.inconclusive
    ))
}

fn verifier_sensitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let p = tri3();
    let res = kmw_pipeline(&p, KmwOptions::default()).map_err(|e| e.to_string())?;
    let target = p.dilate(&res.dilation);
    let good = simplex_cells(&res.triangulation);
    check(verify_triangulation(&target, &good).passed(), || "clean certificate rejected".into())?;
    let rounds = 20;
    let mut caught = 0;
    let mut tried = 0;
    let mut expect = |cells: &[Vec<IntVector>], class: ViolationClass, unimodular: bool| {
        tried += 1;
        let mut r = verify_triangulation(&target, cells);
        if unimodular {
            r = r.merge(verify_unimodular(cells));
        }
        if r.classes().contains(&class) {
            caught += 1;
        }
    };
    for _ in 0..rounds {
        let i = rng.gen_range(0..good.len());
        let mut missing = good.clone();
        missing.remove(i);
        expect(&missing, ViolationClass::Missing, false);

        let mut dup = good.clone();
        dup.push(good[i].clone());
        expect(&dup, ViolationClass::Duplicate, false);

        // next to a neighbour across an edge, add the flipped pair of the quadrilateral
        let (j, k) = neighbours(&good, &mut rng);
        let shared: Vec<IntVector> = good[j].iter().filter(|v| good[k].contains(v)).cloned().collect();
        let c = good[j].iter().find(|v| !shared.contains(v)).unwrap().clone();
        let e = good[k].iter().find(|v| !shared.contains(v)).unwrap().clone();
        let mut overlap = good.clone();
        overlap[k] = vec![c.clone(), e.clone(), shared[0].clone()];
        overlap.push(vec![c, e, shared[1].clone()]);
        expect(&overlap, ViolationClass::Overlap, false);

        // a cell grown by a factor of two about one of its vertices
        let mut fat = good.clone();
        let base = fat[i][0].clone();
        for v in fat[i].iter_mut().skip(1) {
            *v = &(&*v + &*v) - &base;
        }
        expect(&fat, ViolationClass::NonUnimodular, true);
    }

    let q = Polytope::new(&[ivec![0, 0], ivec![1, 0], ivec![0, 1], ivec![1, 1]]).unwrap();
    let mixed = main_pipeline(&q, MixedOptions::default()).map_err(|e| e.to_string())?;
    let want = [q.dilate(&mixed.c_power()), q.dilate(&mixed.factorial_power())];
    check(verify_mixed_support(&mixed.cells, &want).passed(), || "clean mixed certificate rejected".into())?;
    let full: Vec<usize> = (0..mixed.cells.len()).filter(|&i| mixed.cells[i].summed().dim() == 2).collect();
    for _ in 0..rounds {
        tried += 1;
        let drop = *full.choose(&mut rng).unwrap();
        let cells: Vec<DElt> = mixed.cells.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, c)| c.clone()).collect();
        if verify_mixed_support(&cells, &want).classes().contains(&ViolationClass::WrongSupport) {
            caught += 1;
        }
    }
    check(caught == tried, || format!("{caught} of {tried} corruptions caught"))?;
    Ok(format!("{caught}/{tried} corruptions caught over 5 defect classes"))
}

/// Two cells sharing an edge.
fn neighbours(cells: &[Vec<IntVector>], rng: &mut ChaCha8Rng) -> (usize, usize) {
    loop {
        let j = rng.gen_range(0..cells.len());
        let k = rng.gen_range(0..cells.len());
        if j != k && cells[j].iter().filter(|v| cells[k].contains(v)).count() == 2 {
            return (j, k);
        }
    }
}

fn box_point_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let total = 50;
    let mut points = 0;
    for _ in 0..total {
        let d = rng.gen_range(1..=3);
        let dims = random_dims(&mut rng, d, 2);
        let s = random_tuple(&mut rng, d, &dims, 2, 4);
        let got = box_points(&s, d);
        let product: BigInt = s.iter().map(|t| t.index()).product();
        check(BigInt::from(got.len() + 1) == product, || format!("{s:?}: {} box points, product {product}", got.len()))?;
        let mut pairs: Vec<(Vec<i64>, Vec<u64>)> = got.iter().map(|b| (b.lift().iter().map(|v| i64::try_from(v).unwrap()).collect(), b.c().to_vec())).collect();
        pairs.push((vec![0; d], vec![0; s.len()]));
        pairs.sort();
        check(pairs == support::brute_box_points(&s), || format!("{s:?}: c tuples differ from the oracle"))?;
        check(got.iter().all(|b| b.c().iter().all(|&c| c as usize <= d)), || format!("{s:?}: c exceeds d"))?;
        points += got.len();
    }
    Ok(format!("{total} tuples, {points} box points, all match"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 gamma cell counts", Duration::from_secs(10), gamma_counts),
        ("2 strategy independence", Duration::from_secs(60), strategy_independence),
        ("3 restriction commutation", Duration::from_secs(120), restriction_commutes),
        ("4 pulling and dicing", Duration::from_secs(5), pulling_and_dicing),
        ("5 kmw triangle", Duration::from_secs(60), kmw_triangle),
        ("6 kmw reeve index drop", Duration::from_secs(120), kmw_reeve),
        ("7 main pipeline family", Duration::from_secs(300), main_pipeline_family),
        ("8 rule family health", Duration::from_secs(600), rule_family_health),
        ("9 verifier sensitivity", Duration::from_secs(10), verifier_sensitivity),
        ("10 box point oracle", Duration::from_secs(60), box_point_oracle),
    ];
    let mut failed = Vec::new();
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let line = match (&outcome, took <= budget) {
            (Ok(detail), true) => format!("PASS  {name}: {detail} [{took:.2?} of {budget:?}]"),
            (Ok(detail), false) => format!("FAIL  {name}: {detail} [{took:.2?}, over {budget:?}]"),
            (Err(why), _) => format!("FAIL  {name}: {why} [{took:.2?} of {budget:?}]"),
        };
        println!("{line}");
        if line.starts_with("FAIL") {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
