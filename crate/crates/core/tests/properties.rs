use geoduplex_core::propagation::{effective_interuser_pathloss, interference_power, PathlossSource};
use geoduplex_core::radio_map::PlantedObstruction;
use geoduplex_core::region::{
    compute_mitigation_factor, sampling_lattice, Attenuation, ObstructedPathloss, Provenance,
};
use geoduplex_core::scheduler::hungarian::hungarian;
use geoduplex_core::sim::compute_cdf;
use geoduplex_core::{
    generate_synthetic_map, ue_ue_pathloss, ExtractionParams, IsolationDatabase, Position, Rect,
    RegionPair, SyntheticMapSpec,
};
use proptest::prelude::*;

fn brute_force(cost: &[f64], n: usize) -> f64 {
    fn go(cost: &[f64], n: usize, row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if row == n {
            *best = best.min(acc);
            return;
        }
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                go(cost, n, row + 1, used, acc + cost[row * n + c], best);
                used[c] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, n, 0, &mut vec![false; n], 0.0, &mut best);
    best
}

fn square() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec(0u32..1000, n * n)))
        .prop_map(|(n, v)| (n, v.into_iter().map(f64::from).collect()))
}

fn rect_in(lo: f64, hi: f64) -> impl Strategy<Value = Rect> {
    sized_rect_in(lo, hi, 10.0)
}

fn sized_rect_in(lo: f64, hi: f64, min_side: f64) -> impl Strategy<Value = Rect> {
    (lo..hi, lo..hi, min_side..200.0f64, min_side..200.0f64).prop_map(|(x, y, w, h)| Rect::new(x, x + w, y, y + h))
}

fn position() -> impl Strategy<Value = Position> {
    (-500.0..1500.0f64, -500.0..1500.0f64).prop_map(|(x, y)| Position::new(x, y))
}

fn single_pair_db(a: Rect, b: Rect, alpha: f64) -> IsolationDatabase {
    IsolationDatabase::new(
        vec![RegionPair {
            k: 1,
            region_a: a,
            region_b: b,
            alpha_db: alpha,
        }],
        Provenance {
            map_id: "test".into(),
            attenuation_model: "test".into(),
            params: ExtractionParams {
                admission_threshold_db: 0.0,
                ..ExtractionParams::default()
            },
        },
    )
    .unwrap()
}

proptest! {
    #[test]
    fn hungarian_matches_exhaustive_search((n, cost) in square()) {
        let cols = hungarian(&cost, n).unwrap();
        let mut seen = cols.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let total: f64 = cols.iter().enumerate().map(|(r, &c)| cost[r * n + c]).sum();
        prop_assert_eq!(total, brute_force(&cost, n));
    }

    #[test]
    fn halving_the_step_never_raises_alpha(
        a in sized_rect_in(0.0, 400.0, 40.0),
        b in sized_rect_in(600.0, 1000.0, 40.0),
        wall in rect_in(400.0, 600.0),
        step in 20.0..40.0f64,
    ) {
        let att = ObstructedPathloss { carrier_mhz: 2140.0, penetration_db: 60.0, footprints: vec![wall] };
        let coarse = compute_mitigation_factor(&a, &b, &att, step).unwrap();
        let fine = compute_mitigation_factor(&a, &b, &att, step / 2.0).unwrap();
        prop_assert!(fine <= coarse);
        let lc = sampling_lattice(&a, step).unwrap();
        let lf = sampling_lattice(&a, step / 2.0).unwrap();
        prop_assert!(lc.iter().all(|p| lf.contains(p)));
    }

    #[test]
    fn removing_an_obstruction_never_raises_loss(
        rects in prop::collection::vec(rect_in(0.0, 800.0), 1..4),
        drop in 0usize..4,
        seed in 0u64..50,
        p in position(),
        q in position(),
    ) {
        let planted: Vec<_> = rects
            .iter()
            .map(|&footprint| PlantedObstruction { footprint, penetration_db: 40.0 })
            .collect();
        let mut fewer = planted.clone();
        fewer.remove(drop % planted.len());
        let spec = |obs| SyntheticMapSpec {
            width_m: 1000.0,
            height_m: 1000.0,
            pixel_size_m: 50.0,
            shadowing_sigma_db: 4.0,
            obstructions: obs,
            ..SyntheticMapSpec::default()
        };
        let full = generate_synthetic_map(&spec(planted), seed).unwrap();
        let less = generate_synthetic_map(&spec(fewer), seed).unwrap();
        prop_assert!(less.values().iter().zip(full.values()).all(|(l, f)| l <= f));

        let att = |fp: Vec<Rect>| ObstructedPathloss { carrier_mhz: 2140.0, penetration_db: 60.0, footprints: fp };
        let mut fp = rects.clone();
        let full_att = att(fp.clone());
        fp.remove(drop % rects.len());
        prop_assert!(att(fp).attenuation_db(p, q) <= full_att.attenuation_db(p, q));
    }

    #[test]
    fn effective_loss_is_at_least_model_and_floor(
        a in rect_in(0.0, 300.0),
        b in rect_in(700.0, 1000.0),
        alpha in 60.0..160.0f64,
        u in position(),
        v in position(),
    ) {
        prop_assume!(u.distance_m(&v) > 0.0);
        let db = single_pair_db(a, b, alpha);
        let eff = effective_interuser_pathloss(u, v, &db, 2140.0).unwrap();
        let model = ue_ue_pathloss(u.distance_m(&v) / 1e3, 2140.0).unwrap();
        prop_assert!(eff.value_db >= model);
        let separated = db.pairs()[0].separates(u, v);
        if separated {
            prop_assert!(eff.value_db >= alpha);
        } else {
            prop_assert_eq!(eff.value_db, model);
            prop_assert_eq!(eff.source, PathlossSource::Model);
        }
    }

    #[test]
    fn interference_falls_as_alpha_rises(
        a in rect_in(0.0, 300.0),
        b in rect_in(700.0, 1000.0),
        lo in 60.0..160.0f64,
        extra in 0.0..40.0f64,
        u in position(),
        v in position(),
    ) {
        prop_assume!(u.distance_m(&v) > 0.0);
        let weak = single_pair_db(a, b, lo);
        let strong = single_pair_db(a, b, lo + extra);
        let i = |db: &IsolationDatabase| interference_power(20.0, &effective_interuser_pathloss(u, v, db, 2140.0).unwrap());
        prop_assert!(i(&strong) <= i(&weak));
    }

    #[test]
    fn cdf_merge_is_concatenation(
        x in prop::collection::vec(-200.0..200.0f64, 0..50),
        y in prop::collection::vec(-200.0..200.0f64, 0..50),
    ) {
        let merged = compute_cdf(x.clone()).merge(&compute_cdf(y.clone()));
        let mut all = x;
        all.extend(y);
        let direct = compute_cdf(all);
        prop_assert_eq!(merged.samples(), direct.samples());
        prop_assert!(direct.samples().windows(2).all(|w| w[0] <= w[1]));
    }
}
