use std::fs;

use pilesway_core::{
    compare_methods, generate_event, read_displacement_column, read_event, write_displacements,
    write_event, BeamSection, EstimationResult, PileGeometry, SensorEventRecord, TimeSeries,
    TrainEventSpec, ProfileShape, DynamicSpec, SignalUnit, ChannelPair, SensorLocation,
};
use tempfile::TempDir;

fn geometry() -> PileGeometry<f64> {
    PileGeometry::new(0.447, Some(0.447)).unwrap()
}

fn write(path: &std::path::Path, text: &str) {
    fs::write(path, text).unwrap();
}

const GOOD: &str = "time,ax_top,ay_top,ax_bot,ay_bot\n\
    0.00,0.01,9.81,0.0,9.8\n\
    0.01,0.02,9.80,0.0,9.8\n\
    0.02,0.03,9.81,0.0,9.8\n\
    0.03,0.02,9.82,0.0,9.8\n\
    0.04,0.01,9.81,0.0,9.8\n";

#[test]
fn reads_a_minimal_event() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("ev.csv");
    write(&p, GOOD);
    let r: SensorEventRecord<f64> = read_event(&p, geometry()).unwrap();
    assert_eq!(r.top.ax.len(), 5);
    assert!((r.sample_rate_hz - 100.0).abs() < 1e-9);
    assert!(r.reference.is_none());
    assert!(r.ground_truth.is_none());
    assert_eq!(r.top.ax.values()[1], 0.02);
    assert_eq!(r.bottom.ay.values()[4], 9.8);
}

#[test]
fn reads_lvdt_when_present() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("ev.csv");
    let mut text = String::from("time,ax_top,ay_top,ax_bot,ay_bot,lvdt\n");
    for i in 0..4 {
        text.push_str(&format!("{},0.0,9.81,0.0,9.81,{}\n", i as f64 * 0.5, i as f64 * 1e-3));
    }
    write(&p, &text);
    let r: SensorEventRecord<f64> = read_event(&p, geometry()).unwrap();
    let lvdt = r.reference.unwrap();
    assert_eq!(lvdt.values(), &[0.0, 1e-3, 2e-3, 3e-3]);
    assert!((r.sample_rate_hz - 2.0).abs() < 1e-12);
}

#[test]
fn event_round_trip_preserves_values_to_nine_digits() {
    let spec = TrainEventSpec {
        event_id: "rt".into(),
        duration_s: 6.0,
        peak_positive_mm: 1.5,
        peak_negative_mm: -3.0,
        speed_kmh: 0.0,
        pseudo_profile: ProfileShape::Pulses,
        dynamic: DynamicSpec::default(),
        noise_sigma: 0.005,
        seed: 21,
    };
    let section = BeamSection::new(1e9, 1e-5, 1e3).unwrap();
    let orig = generate_event::<f64>(&spec, &geometry(), &section, 256.0).unwrap();

    let dir = TempDir::new().unwrap();
    let p = dir.path().join("ev.csv");
    write_event(&p, &orig).unwrap();
    let back: SensorEventRecord<f64> = read_event(&p, geometry()).unwrap();

    assert_eq!(back.top.ax.len(), orig.top.ax.len());
    assert!((back.sample_rate_hz - 256.0).abs() < 1e-9);
    let channels = [
        (orig.top.ax.values(), back.top.ax.values()),
        (orig.top.ay.values(), back.top.ay.values()),
        (orig.bottom.ax.values(), back.bottom.ax.values()),
        (orig.bottom.ay.values(), back.bottom.ay.values()),
        (
            orig.reference.as_ref().unwrap().values(),
            back.reference.as_ref().unwrap().values(),
        ),
    ];
    for (a, b) in channels {
        for i in 0..a.len() {
            let tol = 5e-9 * a[i].abs().max(1e-300);
            assert!(
                (a[i] - b[i]).abs() <= tol,
                "sample {i}: {} vs {}",
                a[i],
                b[i]
            );
        }
    }

    // a second write of the re-read record reproduces the file byte for byte
    let p2 = dir.path().join("ev2.csv");
    write_event(&p2, &back).unwrap();
    assert_eq!(fs::read(&p).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn awkward_floats_survive_the_trip() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("ev.csv");
    let vals = [
        std::f64::consts::PI,
        -1.0 / 3.0,
        0.1 + 0.2,
        9.80665,
        1.234_567_89e-7,
        -6.273e-3,
    ];
    let n = vals.len();
    let dt = 1.0 / 256.0;
    let s = |v: Vec<f64>, u| TimeSeries::new(dt, 0.0, v, u).unwrap();
    let rec = SensorEventRecord {
        top: ChannelPair::new(
            s(vals.to_vec(), SignalUnit::Accel),
            s(vec![9.81; n], SignalUnit::Accel),
            SensorLocation::Top,
        )
        .unwrap(),
        bottom: ChannelPair::new(
            s(vec![0.0; n], SignalUnit::Accel),
            s(vec![9.81; n], SignalUnit::Accel),
            SensorLocation::Bottom,
        )
        .unwrap(),
        reference: Some(s(vals.iter().map(|v| v * 1e-4).collect(), SignalUnit::Displacement)),
        geometry: geometry(),
        sample_rate_hz: 1.0 / dt,
        ground_truth: None,
    };
    write_event(&p, &rec).unwrap();
    let back: SensorEventRecord<f64> = read_event(&p, geometry()).unwrap();
    for (a, b) in vals.iter().zip(back.top.ax.values()) {
        assert!((a - b).abs() <= 5e-9 * a.abs(), "{a} vs {b}");
    }
}

#[test]
fn rejects_malformed_files() {
    let dir = TempDir::new().unwrap();

    let p = dir.path().join("bad_header.csv");
    write(&p, "time,ax_top,ay_top,ax_bot\n0,0,9.8,0\n1,0,9.8,0\n");
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert!(err.to_string().contains("bad header"), "{err}");

    let p = dir.path().join("bad_float.csv");
    write(
        &p,
        "time,ax_top,ay_top,ax_bot,ay_bot\n0.0,0.0,9.8,0.0,9.8\n0.01,0.0,oops,0.0,9.8\n",
    );
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("data row 2") && msg.contains("ay_top"), "{msg}");

    let p = dir.path().join("nan.csv");
    write(
        &p,
        "time,ax_top,ay_top,ax_bot,ay_bot\n0.0,0.0,9.8,NaN,9.8\n0.01,0.0,9.8,0.0,9.8\n",
    );
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert!(err.to_string().contains("non-finite"), "{err}");

    let p = dir.path().join("ragged.csv");
    write(
        &p,
        "time,ax_top,ay_top,ax_bot,ay_bot\n0.0,0.0,9.8,0.0,9.8\n0.01,0.0,9.8,0.0\n",
    );
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert!(err.to_string().contains("data row 2"), "{err}");

    let p = dir.path().join("nonuniform.csv");
    write(
        &p,
        "time,ax_top,ay_top,ax_bot,ay_bot\n\
         0.00,0,9.8,0,9.8\n0.01,0,9.8,0,9.8\n0.025,0,9.8,0,9.8\n0.03,0,9.8,0,9.8\n",
    );
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("nonuniform time step at data row 3"), "{msg}");

    let p = dir.path().join("empty.csv");
    write(&p, "time,ax_top,ay_top,ax_bot,ay_bot\n");
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert!(err.to_string().contains("no data rows"), "{err}");

    let p = dir.path().join("single.csv");
    write(&p, "time,ax_top,ay_top,ax_bot,ay_bot\n0,0,9.8,0,9.8\n");
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert!(err.to_string().contains("at least 2"), "{err}");

    let err = read_event::<f64>(dir.path().join("missing.csv"), geometry()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn format_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("x.csv");
    write(&p, "time,ax_top\n0,1\n");
    let err = read_event::<f64>(&p, geometry()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

fn toy_result(with_reference: bool) -> EstimationResult<f64> {
    let n = 64;
    let dt = 0.01;
    let mk = |f: &dyn Fn(usize) -> f64| {
        TimeSeries::new(dt, 0.0, (0..n).map(f).collect(), SignalUnit::Displacement).unwrap()
    };
    let dynamic = mk(&|i| 1e-4 * (0.3 * i as f64).sin());
    let p1 = mk(&|i| 2e-3 * (0.05 * i as f64).sin());
    let p2 = mk(&|i| 2.2e-3 * (0.05 * i as f64).sin());
    let reference = with_reference.then(|| mk(&|i| 2.25e-3 * (0.05 * i as f64).sin()));
    let mut result = EstimationResult::assemble(dynamic, p1, p2, reference).unwrap();
    if with_reference {
        result.scores = Some(compare_methods(&result, "toy").unwrap());
    }
    result
}

#[test]
fn displacement_files_round_trip_and_select_columns() {
    let dir = TempDir::new().unwrap();
    let result = toy_result(true);
    let p = dir.path().join("disp.csv");
    write_displacements(&p, &result).unwrap();

    let header = fs::read_to_string(&p).unwrap().lines().next().unwrap().to_string();
    assert_eq!(
        header,
        "time,dyn,pseudo_1dof,pseudo_2dof,total_1dof,total_2dof,reference"
    );

    let total: TimeSeries<f64> = read_displacement_column(&p, Some("total_2dof")).unwrap();
    for i in 0..total.len() {
        let want = result.total_2dof.values()[i];
        assert!((total.values()[i] - want).abs() <= 5e-9 * want.abs().max(1e-300));
    }

    // several value columns: a bare read must refuse and name the choices
    let err = read_displacement_column::<f64>(&p, None).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("pick one of") && msg.contains("total_2dof"), "{msg}");

    let err = read_displacement_column::<f64>(&p, Some("total_3dof")).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("total_3dof") && msg.contains("available"), "{msg}");

    // asking for the time column is not a displacement read
    assert!(read_displacement_column::<f64>(&p, Some("time")).is_err());

    // a two-column file needs no name
    let two = dir.path().join("two.csv");
    write(&two, "time,meas\n0.0,1.0e-3\n0.5,2.0e-3\n1.0,3.0e-3\n");
    let series: TimeSeries<f64> = read_displacement_column(&two, None).unwrap();
    assert_eq!(series.values(), &[1e-3, 2e-3, 3e-3]);
    assert!((series.dt() - 0.5).abs() < 1e-12);

    // first column must be time
    let bad = dir.path().join("bad.csv");
    write(&bad, "meas,time\n1.0,0.0\n2.0,0.5\n");
    let err = read_displacement_column::<f64>(&bad, None).unwrap_err();
    assert!(err.to_string().contains("first column must be time"), "{err}");
}

#[test]
fn displacement_file_omits_reference_when_absent() {
    let dir = TempDir::new().unwrap();
    let result = toy_result(false);
    let p = dir.path().join("disp.csv");
    write_displacements(&p, &result).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "time,dyn,pseudo_1dof,pseudo_2dof,total_1dof,total_2dof");
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn writes_are_atomic_and_overwrite_cleanly() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("out.csv");
    pilesway_core::atomic_write_text(&p, "hello\n").unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), "hello\n");
    pilesway_core::atomic_write_text(&p, "goodbye\n").unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), "goodbye\n");
    let leftovers: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "out.csv")
        .collect();
    assert!(leftovers.is_empty(), "temp files left behind: {leftovers:?}");

    // writing into a missing directory is an io error, not a panic
    let err =
        pilesway_core::atomic_write_text(dir.path().join("no/such/dir.csv"), "x").unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
