mod common;

use common::{read, without_seconds};
use maghho::experiments::{
    cmd_converge, cmd_gauge_dev, CommonOptions, ConvergeConfig, EigenConfig, ManufacturedKind, MeshSource,
};

fn converge_into(dir: &std::path::Path) {
    let cfg = ConvergeConfig {
        common: CommonOptions {
            k: 2,
            out: Some(dir.to_path_buf()),
            ..Default::default()
        },
        mesh: MeshSource::Cartesian { levels: vec![2, 4, 8] },
        case: ManufacturedKind::Standard,
    };
    cmd_converge(&cfg).unwrap();
}

#[test]
fn convergence_outputs_repeat_exactly() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    converge_into(a.path());
    converge_into(b.path());
    assert_eq!(
        without_seconds(&read(a.path().join("convergence.csv"))),
        without_seconds(&read(b.path().join("convergence.csv")))
    );
    assert_eq!(read(a.path().join("convergence.json")), read(b.path().join("convergence.json")));
}

#[test]
fn gauge_dev_outputs_repeat_exactly() {
    let run = |dir: &std::path::Path| {
        let cfg = EigenConfig {
            common: CommonOptions {
                k: 1,
                out: Some(dir.to_path_buf()),
                ..Default::default()
            },
            mesh: MeshSource::Cartesian { levels: vec![4, 6] },
            ..Default::default()
        };
        cmd_gauge_dev(&cfg).unwrap();
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path());
    run(b.path());
    for f in ["gauge_dev.csv", "gauge_dev.json"] {
        assert_eq!(read(a.path().join(f)), read(b.path().join(f)), "{f}");
    }
}
