use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use stenoflow_ffi::*;

fn key(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn model_with(settings: &[(&str, f64)]) -> Result<*mut SfModel, SfStatus> {
    unsafe {
        let params = sf_params_new();
        for (k, v) in settings {
            let status = sf_params_set(params, key(k).as_ptr(), *v);
            if status != SfStatus::Ok {
                sf_params_free(params);
                return Err(status);
            }
        }
        let mut model = ptr::null_mut();
        let status = sf_model_new(params, &mut model);
        sf_params_free(params);
        if status == SfStatus::Ok {
            Ok(model)
        } else {
            assert!(model.is_null());
            Err(status)
        }
    }
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(sf_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn defaults_round_trip() {
    unsafe {
        let params = sf_params_new();
        let mut value = 0.0;
        assert_eq!(
            sf_params_get(params, key("hematocrit").as_ptr(), &mut value),
            SfStatus::Ok
        );
        assert_eq!(value, 0.2);
        assert_eq!(sf_params_set(params, key("m").as_ptr(), 4.0), SfStatus::Ok);
        assert_eq!(
            sf_params_get(params, key("m").as_ptr(), &mut value),
            SfStatus::Ok
        );
        assert_eq!(value, 4.0);
        assert_eq!(
            sf_params_set(params, key("m").as_ptr(), 2.5),
            SfStatus::InvalidParameter
        );
        assert_eq!(
            sf_params_set(params, key("nope").as_ptr(), 1.0),
            SfStatus::UnknownKey
        );
        assert!(last_error().contains("nope"));
        sf_params_free(params);
    }
}

#[test]
fn observables_match_core() {
    let model = model_with(&[]).unwrap();
    unsafe {
        let (mut eta, mut dp, mut tau, mut q) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(sf_radius_ratio(model, 1.0, &mut eta), SfStatus::Ok);
        assert_eq!(
            sf_pressure_gradient_ratio(model, 1.0, &mut dp),
            SfStatus::Ok
        );
        assert_eq!(sf_wall_shear_ratio(model, 1.0, &mut tau), SfStatus::Ok);
        assert_eq!(sf_flow_rate(model, 1.0, dp, &mut q), SfStatus::Ok);
        let params = stenoflow::FlowParams::default();
        assert_eq!(
            dp,
            stenoflow::hemodynamics::pressure_gradient_ratio(&params, 1.0).unwrap()
        );
        assert_eq!(
            tau,
            stenoflow::hemodynamics::wall_shear_ratio(&params, 1.0).unwrap()
        );
        assert!((eta - 0.408841).abs() < 1e-6);
        assert!((q - 1.0).abs() < 1e-10);
        sf_model_free(model);
    }
}

#[test]
fn profile_and_sweep_fill_buffers() {
    let model = model_with(&[]).unwrap();
    unsafe {
        let mut xi = [0.0; 11];
        let mut u = [0.0; 11];
        assert_eq!(
            sf_velocity_profile(model, 2.0, 11, xi.as_mut_ptr(), u.as_mut_ptr()),
            SfStatus::Ok
        );
        assert_eq!(xi[0], 0.0);
        assert!(u[10].abs() < 1e-12);
        assert!(u.windows(2).all(|w| w[1] < w[0]));

        let z = [0.5, 1.0, 2.0, 3.0, 3.5];
        let mut records = [SfAxialRecord::default(); 5];
        let status = sf_axial_sweep(
            model,
            z.as_ptr(),
            z.len(),
            records.as_mut_ptr(),
            ptr::null_mut(),
        );
        assert_eq!(status, SfStatus::Ok);
        assert_eq!(records.map(|r| r.z), z);
        assert!(records[1].dpdz_bar > records[3].dpdz_bar);
        sf_model_free(model);
    }
}

#[test]
fn failures_carry_codes() {
    assert_eq!(
        model_with(&[("l", 3.0)]).unwrap_err(),
        SfStatus::GeometryInvalid
    );
    assert_eq!(
        model_with(&[("hematocrit", 1.2)]).unwrap_err(),
        SfStatus::InvalidParameter
    );

    let model = model_with(&[("hematocrit", 0.8)]).unwrap();
    unsafe {
        let z = [1.0, 4.5];
        let mut records = [SfAxialRecord::default(); 2];
        let mut failed = usize::MAX;
        let status = sf_axial_sweep(model, z.as_ptr(), 2, records.as_mut_ptr(), &mut failed);
        assert_eq!(status, SfStatus::SeriesDivergent);
        assert_eq!(failed, 1);
        assert_eq!(records[0], SfAxialRecord::default());
        let mut out = 0.0;
        assert_eq!(
            sf_pressure_gradient_ratio(model, 4.5, &mut out),
            SfStatus::SeriesDivergent
        );
        assert_eq!(
            sf_radius_ratio(ptr::null(), 1.0, &mut out),
            SfStatus::NullPointer
        );
        sf_model_free(model);
        sf_model_free(ptr::null_mut());
    }
}

#[test]
fn static_strings() {
    unsafe {
        assert_eq!(
            CStr::from_ptr(sf_status_message(SfStatus::Ok))
                .to_str()
                .unwrap(),
            "ok"
        );
        assert_eq!(
            CStr::from_ptr(sf_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn static_library() -> Option<PathBuf> {
    // target/<profile>/deps/abi-<hash> -> target/<profile>/libstenoflow_ffi.a
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libstenoflow_ffi.a");
    lib.exists().then_some(lib)
}

fn cc(args: &[&str], include: &Path) -> std::process::Output {
    Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-I")
        .arg(include)
        .args(args)
        .output()
        .expect("C compiler runs")
}

#[test]
fn header_builds_and_links_from_c() {
    let include = crate_dir().join("include");
    let source = crate_dir().join("tests/c/smoke.c");
    let header = std::fs::read_to_string(include.join("stenoflow.h")).unwrap();
    for symbol in [
        "sf_params_new",
        "sf_model_new",
        "sf_axial_sweep",
        "SF_STATUS_SERIES_DIVERGENT",
    ] {
        assert!(header.contains(symbol), "{symbol}");
    }

    let syntax = cc(
        &[
            "-std=c99",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            source.to_str().unwrap(),
        ],
        &include,
    );
    assert!(
        syntax.status.success(),
        "{}",
        String::from_utf8_lossy(&syntax.stderr)
    );

    let lib = static_library().expect("static library next to the test binary");
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let link = cc(
        &[
            "-std=c99",
            source.to_str().unwrap(),
            lib.to_str().unwrap(),
            "-lpthread",
            "-ldl",
            "-lm",
            "-o",
            exe.to_str().unwrap(),
        ],
        &include,
    );
    assert!(
        link.status.success(),
        "{}",
        String::from_utf8_lossy(&link.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&run.stdout).trim(),
        "0.408841 63.6725"
    );
}
