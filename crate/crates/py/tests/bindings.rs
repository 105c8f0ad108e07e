use pyo3::prelude::*;

const TBOX: &str = include_str!("../../../fixtures/eshowroom/eshowroom.tbox");

#[test]
fn random_scenes_validate_clean() {
    for seed in 0..20 {
        let xml = rrl::random_scene(seed, 4, 3).unwrap();
        assert_eq!(rrl::validate(&xml, TBOX).unwrap(), Vec::<String>::new(), "seed {seed}");
    }
}

#[test]
fn errors_become_python_exceptions() {
    Python::initialize();
    Python::attach(|py| {
        let e = rrl::validate("<rrl-scene", TBOX).unwrap_err();
        assert!(e.is_instance_of::<rrl::RrlError>(py));
        let e = rrl::random_scene(1, 0, 3).unwrap_err();
        assert!(e.to_string().contains("bounds"));
    });
}
