use pilesway_core::{
    builtin_catalog, delta_2dof, forward_pile, generate_event, generate_event_opts, rms_error,
    run_pipeline, angle_series, BeamSection, ChannelPair, DynamicSpec, FirConfig, GenOptions,
    InclinationConfig, PileGeometry, ProfileShape, SensorEventRecord, SensorLocation, SignalUnit,
    TimeSeries, TrainEventSpec, STANDARD_GRAVITY,
};

const FS: f64 = 256.0;
const TAU: f64 = 2.0 * std::f64::consts::PI;

fn lab_geometry() -> PileGeometry<f64> {
    PileGeometry::new(0.447, Some(0.447)).unwrap()
}

fn lab_section() -> BeamSection<f64> {
    BeamSection::new(1e9, 1e-5, 1e3).unwrap()
}

fn noiseless(spec: &TrainEventSpec) -> (SensorEventRecord<f64>, GenOptions) {
    let opts = GenOptions {
        lvdt_sigma: 0.0,
        ..GenOptions::default()
    };
    let (r, _) = generate_event_opts(spec, &lab_geometry(), &lab_section(), FS, &opts).unwrap();
    (r, opts)
}

#[test]
fn catalog_matches_reference_rows() {
    let cat = builtin_catalog();
    assert_eq!(cat.len(), 10);
    let t1 = &cat[0];
    assert_eq!(t1.event_id, "train1");
    assert_eq!(t1.duration_s, 76.00);
    assert_eq!(t1.peak_positive_mm, 1.563);
    assert_eq!(t1.peak_negative_mm, -6.273);
    assert_eq!(t1.speed_kmh, 8.7);
    let t10 = &cat[9];
    assert_eq!(t10.event_id, "train10");
    assert_eq!(t10.duration_s, 11.29);
    assert_eq!(t10.peak_positive_mm, 13.925);
    assert_eq!(t10.peak_negative_mm, -12.32);
    assert_eq!(t10.speed_kmh, 41.0);
    // distinct ids and seeds
    for i in 0..10 {
        for j in i + 1..10 {
            assert_ne!(cat[i].event_id, cat[j].event_id);
            assert_ne!(cat[i].seed, cat[j].seed);
        }
    }
}

#[test]
fn zero_amplitude_event_is_level_and_still() {
    let spec = TrainEventSpec {
        event_id: "null".into(),
        duration_s: 10.0,
        peak_positive_mm: 0.0,
        peak_negative_mm: 0.0,
        speed_kmh: 0.0,
        pseudo_profile: ProfileShape::Zero,
        dynamic: DynamicSpec::default(),
        noise_sigma: 0.0,
        seed: 7,
    };
    let (r, _) = noiseless(&spec);
    let g = STANDARD_GRAVITY;
    assert!(r.top.ax.values().iter().all(|&v| v == 0.0));
    assert!(r.top.ay.values().iter().all(|&v| v == g));
    assert!(r.bottom.ax.values().iter().all(|&v| v == 0.0));
    assert!(r.bottom.ay.values().iter().all(|&v| v == g));
    assert!(r.reference.unwrap().values().iter().all(|&v| v == 0.0));
    let gt = r.ground_truth.unwrap();
    assert!(gt.delta_t.values().iter().all(|&v| v == 0.0));
}

#[test]
fn static_hold_matches_forward_model() {
    let spec = TrainEventSpec {
        event_id: "hold".into(),
        duration_s: 8.0,
        peak_positive_mm: 0.0,
        peak_negative_mm: 0.0,
        speed_kmh: 0.0,
        pseudo_profile: ProfileShape::Hold,
        dynamic: DynamicSpec::default(),
        noise_sigma: 0.0,
        seed: 3,
    };
    let (r, _) = noiseless(&spec);
    let (dp, th1, th2) = forward_pile(&lab_section(), &lab_geometry()).unwrap();

    for &v in r.reference.as_ref().unwrap().values() {
        assert!((v - dp).abs() < 1e-15, "reference {v} vs forward {dp}");
    }
    let rec_th1 = angle_series(&r.top).unwrap();
    let rec_th2 = angle_series(&r.bottom).unwrap();
    for i in 0..rec_th1.len() {
        assert!((rec_th1.values()[i] - th1).abs() < 1e-6);
        assert!((rec_th2.values()[i] - th2).abs() < 1e-6);
    }
    let gt = r.ground_truth.unwrap();
    assert!(gt.delta_d.values().iter().all(|&v| v == 0.0));
}

#[test]
fn identical_seeds_reproduce_bit_for_bit() {
    let spec = builtin_catalog().into_iter().nth(4).unwrap();
    let a = generate_event(&spec, &lab_geometry(), &lab_section(), FS).unwrap();
    let b = generate_event(&spec, &lab_geometry(), &lab_section(), FS).unwrap();
    assert_eq!(a.top.ax.values(), b.top.ax.values());
    assert_eq!(a.top.ay.values(), b.top.ay.values());
    assert_eq!(a.bottom.ax.values(), b.bottom.ax.values());
    assert_eq!(a.bottom.ay.values(), b.bottom.ay.values());
    assert_eq!(
        a.reference.as_ref().unwrap().values(),
        b.reference.as_ref().unwrap().values()
    );

    let mut other = spec.clone();
    other.seed += 1;
    let c = generate_event(&other, &lab_geometry(), &lab_section(), FS).unwrap();
    assert_ne!(a.top.ax.values(), c.top.ax.values());
}

#[test]
fn ground_truth_closes_exactly() {
    let spec = builtin_catalog().into_iter().nth(7).unwrap();
    let r = generate_event(&spec, &lab_geometry(), &lab_section(), FS).unwrap();
    let gt = r.ground_truth.unwrap();
    let m = r.geometry.m;
    let scale = gt
        .delta_p
        .values()
        .iter()
        .fold(0.0f64, |a, &v| a.max(v.abs()));
    for i in 0..gt.delta_t.len() {
        // superposition is exact by construction
        assert_eq!(
            gt.delta_t.values()[i],
            gt.delta_p.values()[i] + gt.delta_d.values()[i]
        );
        // rotations and deflection satisfy the 2DOF relation
        let rec = delta_2dof(gt.theta1.values()[i], gt.theta2.values()[i], m).unwrap();
        assert!(
            (rec - gt.delta_p.values()[i]).abs() <= 1e-12 * scale,
            "sample {i}: {rec} vs {}",
            gt.delta_p.values()[i]
        );
    }
}

#[test]
fn generated_peaks_hit_the_spec() {
    for spec in [&builtin_catalog()[0], &builtin_catalog()[9]] {
        let r = generate_event(spec, &lab_geometry(), &lab_section(), FS).unwrap();
        let gt = r.ground_truth.unwrap();
        let max = gt.delta_t.values().iter().cloned().fold(f64::MIN, f64::max);
        let min = gt.delta_t.values().iter().cloned().fold(f64::MAX, f64::min);
        let pk_pos = spec.peak_positive_mm * 1e-3;
        let pk_neg = spec.peak_negative_mm * 1e-3;
        assert!(
            ((max - pk_pos) / pk_pos).abs() < 5e-3,
            "{}: max {max} vs {pk_pos}",
            spec.event_id
        );
        assert!(
            ((min - pk_neg) / pk_neg).abs() < 5e-3,
            "{}: min {min} vs {pk_neg}",
            spec.event_id
        );
    }
}

#[test]
fn one_sided_profile_supported() {
    let spec = TrainEventSpec {
        event_id: "down-only".into(),
        duration_s: 20.0,
        peak_positive_mm: 0.0,
        peak_negative_mm: -5.0,
        speed_kmh: 0.0,
        pseudo_profile: ProfileShape::Pulses,
        dynamic: DynamicSpec {
            fraction: 0.0,
            ..DynamicSpec::default()
        },
        noise_sigma: 0.0,
        seed: 11,
    };
    let (r, _) = noiseless(&spec);
    let gt = r.ground_truth.unwrap();
    let min = gt.delta_t.values().iter().cloned().fold(f64::MAX, f64::min);
    let max = gt.delta_t.values().iter().cloned().fold(f64::MIN, f64::max);
    assert!(((min + 5e-3) / 5e-3).abs() < 5e-3, "min {min}");
    assert!(max <= 1e-9, "one-sided profile should not overshoot: {max}");
}

#[test]
fn noise_free_pseudo_static_recovery_within_two_percent() {
    let mut spec = builtin_catalog().into_iter().nth(4).unwrap();
    spec.noise_sigma = 0.0;
    let (r, _) = noiseless(&spec);
    let result = run_pipeline(
        &r,
        &FirConfig::default_for(1.0 / FS),
        &InclinationConfig::default(),
    )
    .unwrap();
    let gt = r.ground_truth.as_ref().unwrap();
    // exclude the filter warmup from both sides of the comparison
    let w = 512;
    let est = result.pseudo_2dof.clone().with_warmup(w).unwrap();
    let truth = gt.delta_p.clone().with_warmup(w).unwrap();
    let e2 = rms_error(&est, &truth).unwrap();
    assert!(e2 < 0.02, "pseudo-static E2 {:.2}%", e2 * 100.0);
}

#[test]
fn dynamic_only_record_reconstructs_below_five_percent() {
    // tones parked on the trend filter's spectral nulls so preconditioning
    // leaves them alone; theta = 0 throughout
    let n_sma = 227usize;
    let n = (20.0 * FS) as usize;
    let g = STANDARD_GRAVITY;
    let freqs: Vec<f64> = (2..=5).map(|j| j as f64 * FS / n_sma as f64).collect();
    let mut disp = vec![0.0; n];
    let mut accel = vec![0.0; n];
    for (j, &f) in freqs.iter().enumerate() {
        let w = TAU * f;
        let amp = 1e-3 / (f * f);
        let phase = 0.7 * j as f64;
        for i in 0..n {
            let arg = w * i as f64 / FS + phase;
            disp[i] += amp * arg.sin();
            accel[i] += -amp * w * w * arg.sin();
        }
    }
    let dt = 1.0 / FS;
    let series = |v: Vec<f64>, u| TimeSeries::new(dt, 0.0, v, u).unwrap();
    let record = SensorEventRecord {
        top: ChannelPair::new(
            series(accel, SignalUnit::Accel),
            series(vec![g; n], SignalUnit::Accel),
            SensorLocation::Top,
        )
        .unwrap(),
        bottom: ChannelPair::new(
            series(vec![0.0; n], SignalUnit::Accel),
            series(vec![g; n], SignalUnit::Accel),
            SensorLocation::Bottom,
        )
        .unwrap(),
        reference: Some(series(disp, SignalUnit::Displacement)),
        geometry: lab_geometry(),
        sample_rate_hz: FS,
        ground_truth: None,
    };
    let result = run_pipeline(
        &record,
        &FirConfig::default_for(dt),
        &InclinationConfig::default(),
    )
    .unwrap();
    let e2 = result.scores.as_ref().unwrap().e2_2dof;
    assert!(e2 < 0.05, "dynamic-only E2 {:.2}%", e2 * 100.0);
}

#[test]
fn catalog_run_favors_the_two_rotation_model() {
    let fir = FirConfig::default_for(1.0 / FS);
    let incl = InclinationConfig::default();
    let mut wins = 0;
    let (mut sum_1dof, mut sum_2dof) = (0.0, 0.0);
    for spec in builtin_catalog() {
        let r = generate_event(&spec, &lab_geometry(), &lab_section(), FS).unwrap();
        let scores = run_pipeline(&r, &fir, &incl).unwrap().scores.unwrap();
        if scores.e2_2dof < scores.e2_1dof {
            wins += 1;
        }
        sum_1dof += scores.e2_1dof;
        sum_2dof += scores.e2_2dof;
    }
    assert!(wins >= 9, "2DOF won only {wins}/10");
    let reduction = (sum_1dof - sum_2dof) / sum_1dof;
    assert!(
        reduction >= 0.25,
        "average E2 reduction {:.1}%",
        reduction * 100.0
    );
}

#[test]
fn fully_fixed_base_makes_the_models_agree() {
    let spec = builtin_catalog().into_iter().nth(5).unwrap();
    let opts = GenOptions {
        fully_fixed: true,
        ..GenOptions::default()
    };
    let (r, _) =
        generate_event_opts(&spec, &lab_geometry(), &lab_section(), FS, &opts).unwrap();
    let gt = r.ground_truth.as_ref().unwrap();
    assert!(gt.theta2.values().iter().all(|&v| v == 0.0));
    let scores = run_pipeline(
        &r,
        &FirConfig::default_for(1.0 / FS),
        &InclinationConfig::default(),
    )
    .unwrap()
    .scores
    .unwrap();
    assert!(
        (scores.e2_2dof - scores.e2_1dof).abs() < 0.01,
        "1DOF {:.3}% vs 2DOF {:.3}%",
        scores.e2_1dof * 100.0,
        scores.e2_2dof * 100.0
    );
}

#[test]
fn error_grows_with_noise() {
    let base = builtin_catalog().into_iter().nth(8).unwrap();
    let fir = FirConfig::default_for(1.0 / FS);
    let incl = InclinationConfig::default();
    let sigmas = [0.0, 0.01, 0.04, 0.12];
    let mut avgs = Vec::new();
    for &sigma in &sigmas {
        let mut total = 0.0;
        for seed in 1..=10u64 {
            let spec = TrainEventSpec {
                noise_sigma: sigma,
                seed,
                event_id: format!("n{sigma}-{seed}"),
                ..base.clone()
            };
            let r = generate_event(&spec, &lab_geometry(), &lab_section(), FS).unwrap();
            let scores = run_pipeline(&r, &fir, &incl).unwrap().scores.unwrap();
            total += scores.e2_2dof;
        }
        avgs.push(total / 10.0);
    }
    for pair in avgs.windows(2) {
        assert!(
            pair[1] >= pair[0] - 1e-4,
            "E2 averages not nondecreasing: {avgs:?}"
        );
    }
}

#[test]
fn generation_rejects_bad_inputs() {
    let mut spec = builtin_catalog().into_iter().next().unwrap();
    // sample rate below 20x the dynamic band edge
    let err = generate_event(&spec, &lab_geometry(), &lab_section(), 64.0).unwrap_err();
    assert!(err.to_string().contains("sample rate"), "{err}");

    let no_h = PileGeometry::new(0.447, None).unwrap();
    assert!(generate_event(&spec, &no_h, &lab_section(), FS).is_err());

    spec.duration_s = -1.0;
    assert!(generate_event(&spec, &lab_geometry(), &lab_section(), FS).is_err());

    let mut bad_band = builtin_catalog().into_iter().next().unwrap();
    bad_band.dynamic.f_lo = 0.3;
    assert!(generate_event(&bad_band, &lab_geometry(), &lab_section(), FS).is_err());

    let mut bad_noise = builtin_catalog().into_iter().next().unwrap();
    bad_noise.noise_sigma = -0.1;
    assert!(generate_event(&bad_noise, &lab_geometry(), &lab_section(), FS).is_err());
}

#[test]
fn report_captures_generation_parameters() {
    let spec = builtin_catalog().into_iter().nth(2).unwrap();
    let (r, report) =
        generate_event_opts(&spec, &lab_geometry(), &lab_section(), FS, &GenOptions::default())
            .unwrap();
    assert_eq!(report.event_id, "train3");
    assert_eq!(report.seed, spec.seed);
    assert_eq!(report.n_samples, r.top.ax.len());
    assert_eq!(report.sample_rate_hz, FS);
    assert!(!report.pulses.is_empty());
    assert_eq!(report.tones.len(), 24);
    let json = serde_json::to_string(&report).unwrap();
    for key in ["seed", "noise_sigma", "lvdt_sigma", "pulses", "tones", "geometry_h"] {
        assert!(json.contains(key), "report JSON missing {key}");
    }
}

#[test]
fn event_spec_json_fills_defaults_and_rejects_unknown_keys() {
    let minimal = r#"{
        "event_id": "site-a",
        "duration_s": 30.0,
        "peak_positive_mm": 2.0,
        "peak_negative_mm": -4.0
    }"#;
    let spec: TrainEventSpec = serde_json::from_str(minimal).unwrap();
    assert_eq!(spec.pseudo_profile, ProfileShape::Pulses);
    assert_eq!(spec.dynamic.f_lo, 0.7);
    assert_eq!(spec.dynamic.f_max, 6.0);
    assert_eq!(spec.dynamic.fraction, 0.05);
    assert_eq!(spec.noise_sigma, 0.005);
    assert_eq!(spec.seed, 0);
    spec.validate().unwrap();

    let misspelled = r#"{
        "event_id": "site-a",
        "duration_s": 30.0,
        "peak_positive_mm": 2.0,
        "peak_negative_mm": -4.0,
        "noise_sgima": 0.01
    }"#;
    let err = serde_json::from_str::<TrainEventSpec>(misspelled).unwrap_err();
    assert!(err.to_string().contains("noise_sgima"), "{err}");

    let nested = r#"{
        "event_id": "site-b",
        "duration_s": 12.0,
        "peak_positive_mm": 1.0,
        "peak_negative_mm": -1.0,
        "pseudo_profile": "hold",
        "dynamic": {"fraction": 0.0}
    }"#;
    let spec: TrainEventSpec = serde_json::from_str(nested).unwrap();
    assert_eq!(spec.pseudo_profile, ProfileShape::Hold);
    assert_eq!(spec.dynamic.fraction, 0.0);
    assert_eq!(spec.dynamic.f_max, 6.0);
}

#[test]
fn bottom_inertial_leak_is_configurable() {
    let spec = builtin_catalog().into_iter().nth(3).unwrap();
    let clean =
        generate_event_opts(&spec, &lab_geometry(), &lab_section(), FS, &GenOptions::default())
            .unwrap()
            .0;
    let leaky_opts = GenOptions {
        bottom_inertial_fraction: 0.2,
        ..GenOptions::default()
    };
    let leaky =
        generate_event_opts(&spec, &lab_geometry(), &lab_section(), FS, &leaky_opts)
            .unwrap()
            .0;
    assert_ne!(clean.bottom.ax.values(), leaky.bottom.ax.values());
    assert_eq!(clean.top.ax.values(), leaky.top.ax.values());
}
