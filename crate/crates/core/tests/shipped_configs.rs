use std::path::PathBuf;

use waveguide_entanglement::scenario::{
    read_config, run_sweep, write_config, MethodTag, METHOD_AGREEMENT_TOL,
};

fn shipped() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    v.sort();
    v
}

#[test]
fn every_figure_has_a_config() {
    let names: Vec<String> = shipped()
        .iter()
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    for prefix in [
        "fig2-one-one",
        "fig3-two-zero",
        "fig4-noon",
        "fig5-sep-squeezed",
        "fig6-ent-squeezed",
        "fig7-one-one-lossy",
        "fig8-sep-squeezed-lossy",
        "fig9-sep-squeezed-long",
        "fig10-ent-squeezed-lossy",
    ] {
        assert!(
            names.iter().any(|n| n.starts_with(prefix)),
            "no config for {prefix}"
        );
    }
}

#[test]
fn shipped_configs_run_and_methods_agree() {
    for path in shipped() {
        let cfg = read_config(&path).unwrap();
        let res = run_sweep(&cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!res.rows.is_empty());
        assert!(
            res.rows.iter().all(|r| r.e_n >= 0.0 && r.e_n.is_finite()),
            "{}",
            path.display()
        );
        assert!(res.rows.windows(2).all(|w| w[0].tau <= w[1].tau));
        if let Some(gap) = res.max_method_gap() {
            assert!(
                gap < METHOD_AGREEMENT_TOL,
                "{}: gap {gap:e}",
                path.display()
            );
            assert_eq!(
                res.series(MethodTag::Analytic).len(),
                res.series(MethodTag::Numeric).len()
            );
        }
        if !cfg.scenario.is_gaussian() {
            assert!(
                res.max_method_gap().is_some(),
                "{}: Fock configs check both routes",
                path.display()
            );
        }
    }
}

#[test]
fn configs_survive_a_write_read_cycle() {
    let dir = tempfile::tempdir().unwrap();
    for path in shipped() {
        let cfg = read_config(&path).unwrap();
        let copy = dir.path().join(path.file_name().unwrap());
        write_config(&cfg, &copy).unwrap();
        assert_eq!(read_config(&copy).unwrap(), cfg);
    }
}
