use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use pptop_ffi::*;

fn family(name: &str, k: usize) -> *mut PptDigraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ppt_digraph_family(name.as_ptr(), k, &mut g) },
        PptStatus::Ok
    );
    g
}

fn take_string(s: *mut c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ppt_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = ppt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn build_and_inspect() {
    let edges = [0usize, 1, 1, 2, 2, 0];
    let mut g = ptr::null_mut();
    let status = unsafe { ppt_digraph_new(3, edges.as_ptr(), 3, &mut g) };
    assert_eq!(status, PptStatus::Ok);
    assert!(ppt_last_error().is_null());
    unsafe {
        assert_eq!(ppt_digraph_vertex_count(g), 3);
        assert_eq!(ppt_digraph_edge_count(g), 3);
        let mut json = ptr::null_mut();
        assert_eq!(ppt_digraph_to_json(g, &mut json), PptStatus::Ok);
        assert_eq!(take_string(json), "{\"n\":3,\"edges\":[[0,1],[1,2],[2,0]]}");
        ppt_digraph_free(g);
        assert_eq!(ppt_digraph_vertex_count(ptr::null()), 0);
        ppt_digraph_free(ptr::null_mut());
    }
}

#[test]
fn parse_both_formats() {
    for text in ["{\"n\":2,\"edges\":[[0,1]]}", "2\n0 1\n"] {
        let text = CString::new(text).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(
            unsafe { ppt_digraph_parse(text.as_ptr(), &mut g) },
            PptStatus::Ok
        );
        assert_eq!(unsafe { ppt_digraph_edge_count(g) }, 1);
        unsafe { ppt_digraph_free(g) };
    }
}

#[test]
fn errors_are_reported() {
    let edges = [0usize, 5];
    let mut g = ptr::null_mut();
    let status = unsafe { ppt_digraph_new(3, edges.as_ptr(), 1, &mut g) };
    assert_eq!(status, PptStatus::InvalidInput);
    assert!(g.is_null());
    assert!(last_error().contains("outside 0..3"));

    let bad = CString::new("{\"n\": 2").unwrap();
    assert_eq!(
        unsafe { ppt_digraph_parse(bad.as_ptr(), &mut g) },
        PptStatus::InvalidInput
    );
    assert!(last_error().starts_with("parse error"));

    let name = CString::new("wheel").unwrap();
    assert_eq!(
        unsafe { ppt_digraph_family(name.as_ptr(), 3, &mut g) },
        PptStatus::InvalidInput
    );
    assert_eq!(
        unsafe { ppt_digraph_new(3, ptr::null(), 1, &mut g) },
        PptStatus::NullPointer
    );
    assert_eq!(
        unsafe { ppt_digraph_parse(ptr::null(), &mut g) },
        PptStatus::NullPointer
    );
    assert_eq!(
        unsafe { ppt_digraph_to_json(ptr::null(), &mut ptr::null_mut()) },
        PptStatus::NullPointer
    );
}

#[test]
fn homomorphisms_and_cores() {
    let (c6, c3) = (family("cycle", 6), family("cycle", 3));
    let mut map = [usize::MAX; 6];
    let mut found = false;
    unsafe {
        assert_eq!(
            ppt_find_hom(c6, c3, ptr::null(), map.as_mut_ptr(), &mut found),
            PptStatus::Ok
        );
        assert!(found);
        assert_eq!(map, [0, 1, 2, 0, 1, 2]);
        let mut back = [0usize; 3];
        assert_eq!(
            ppt_find_hom(c3, c6, ptr::null(), back.as_mut_ptr(), &mut found),
            PptStatus::Ok
        );
        assert!(!found);

        let edges = [0usize, 1, 1, 2, 2, 0, 3, 4, 4, 5, 5, 3];
        let mut two = ptr::null_mut();
        assert_eq!(
            ppt_digraph_new(6, edges.as_ptr(), 6, &mut two),
            PptStatus::Ok
        );
        let mut core = ptr::null_mut();
        assert_eq!(ppt_core(two, ptr::null(), &mut core), PptStatus::Ok);
        assert_eq!(ppt_digraph_vertex_count(core), 3);
        for g in [c6, c3, two, core] {
            ppt_digraph_free(g);
        }
    }
}

#[test]
fn conditions_and_classification() {
    let c5 = family("cycle", 5);
    let t3 = family("tournament", 3);
    let mut yes = true;
    let cond = |s: &str| CString::new(s).unwrap();
    unsafe {
        assert_eq!(
            ppt_check_condition(c5, cond("cyclic:5").as_ptr(), ptr::null(), &mut yes),
            PptStatus::Ok
        );
        assert!(!yes);
        assert_eq!(
            ppt_check_condition(c5, cond("cyclic:3").as_ptr(), ptr::null(), &mut yes),
            PptStatus::Ok
        );
        assert!(yes);
        let dsl = cond("f(x,x,y)=f(y,y,x); f(y,y,x)=f(x,y,y); f(x,y,y)=f(y,x,x)");
        assert_eq!(
            ppt_check_condition(t3, dsl.as_ptr(), ptr::null(), &mut yes),
            PptStatus::Ok
        );
        assert!(yes);
        assert_eq!(
            ppt_check_condition(t3, cond("wat").as_ptr(), ptr::null(), &mut yes),
            PptStatus::InvalidInput
        );

        assert_eq!(ppt_has_maltsev(t3, &mut yes), PptStatus::Ok);
        assert!(!yes);
        assert_eq!(ppt_has_maltsev(c5, &mut yes), PptStatus::Ok);
        assert!(yes);

        let mut json = ptr::null_mut();
        assert_eq!(ppt_classify_json(c5, ptr::null(), &mut json), PptStatus::Ok);
        let json = take_string(json);
        assert!(json.starts_with("{\"verdict\":\"StrictlyBelow\""), "{json}");
        assert!(json.contains("\"name\":\"C_5\""));
        ppt_digraph_free(c5);
        ppt_digraph_free(t3);
    }
}

#[test]
fn limits_surface_as_resource_errors() {
    let c4 = family("cycle", 4);
    let tight = PptLimits {
        vertex_budget: 100,
        ..PptLimits::default()
    };
    let cond = CString::new("cyclic:5").unwrap();
    let mut yes = false;
    let status = unsafe { ppt_check_condition(c4, cond.as_ptr(), &tight, &mut yes) };
    assert_eq!(status, PptStatus::ResourceLimit);
    assert!(last_error().contains("budget"));
    unsafe { ppt_digraph_free(c4) };
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pptop.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "ppt_digraph_new",
        "ppt_classify_json",
        "ppt_last_error",
        "PPT_STATUS_RESOURCE_LIMIT",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler on PATH; header syntax not checked");
        return;
    };
    assert!(status.success());
}

#[test]
fn c_program_links_and_runs() {
    // target/<profile>/deps/api-<hash> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libpptop_ffi.a");
    if !cfg!(target_os = "linux") || !lib.exists() {
        eprintln!("static library not found at {}; skipping", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let bin = Path::new(env!("CARGO_TARGET_TMPDIR")).join("pptop_smoke");
    let Ok(status) = Command::new("cc")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"ok\n");
}
