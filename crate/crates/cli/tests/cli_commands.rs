use std::path::PathBuf;

use cartan_cli::{export_algebra, import_algebra, run, AlgebraFile, FileError, EXIT_USAGE};
use cartan_core::{build, CartanFamily};

fn cartan(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cartan").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cartan-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn family(s: &str) -> cartan_core::CartanAlgebra {
    build(&s.parse::<CartanFamily>().unwrap()).unwrap()
}

const HEADER: &str =
    "\"format_version\": 1, \"p\": 2, \"dim\": 3, \"labels\": [\"a\", \"b\", \"c\"]";

#[test]
fn export_then_import_keeps_structure_constants() {
    let w = family("W(1,(2))");
    let text = export_algebra(w.algebra());
    let (back, hash) = import_algebra(&text).unwrap();
    assert_eq!(
        back.structure_constants(),
        w.algebra().structure_constants()
    );
    assert_eq!(hash, AlgebraFile::parse(&text).unwrap().hash());
    assert_eq!(export_algebra(&back), text);
}

#[test]
fn exported_brackets_match_nonzero_constants() {
    let h = family("H(4,(1,1,1,1))");
    let file = AlgebraFile::from_algebra(h.algebra());
    assert_eq!(file.brackets.len(), h.algebra().nonzero_constants());
}

#[test]
fn duplicate_brackets_are_rejected() {
    let text = format!("{{{HEADER}, \"brackets\": [[0, 1, 2, 1], [0, 1, 2, 1]]}}");
    match AlgebraFile::parse(&text) {
        Err(FileError::Field { field, .. }) => assert_eq!(field, "brackets[1]"),
        other => panic!("accepted a duplicate: {other:?}"),
    }
}

#[test]
fn out_of_range_index_names_the_entry() {
    let text = format!("{{{HEADER}, \"brackets\": [[0, 1, 2, 1], [0, 2, 7, 1]]}}");
    let e = AlgebraFile::parse(&text).unwrap_err();
    assert!(e.to_string().contains("brackets[1]"), "{e}");
}

#[test]
fn malformed_json_reports_a_position() {
    let e = AlgebraFile::parse("{\n  \"p\": 2,\n  oops\n}").unwrap_err();
    assert!(matches!(e, FileError::Syntax { line: 3, .. }), "{e:?}");
}

#[test]
fn jacobi_violations_are_rejected() {
    // [a,b] = b and [b,c] = a: the identity fails on (a, b, c).
    let text = format!("{{{HEADER}, \"brackets\": [[0, 1, 1, 1], [1, 2, 0, 1]]}}");
    let e = import_algebra(&text).unwrap_err();
    assert!(
        matches!(
            e,
            FileError::Jacobi {
                triple: (0, 1, 2),
                ..
            }
        ),
        "{e:?}"
    );

    let path = scratch("broken.json");
    std::fs::write(&path, &text).unwrap();
    let (code, _, err) = cartan(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Jacobi"), "{err}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["analyze", "S(2,(1,2))'"][..],
        &["verify", "special", "--m", "1,2"],
        &["table", "--max-sum", "3", "--format", "markdown"],
        &["iso", "W(1,(3))'", "H(2,(1,3))", "--format", "doc"],
    ] {
        let first = cartan(args);
        let second = cartan(args);
        assert_eq!(first.0, second.0, "{args:?}");
        assert_eq!(first.1, second.1, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cartan(&["verify", "witt", "--l", "3"]).0, 0);
    assert_eq!(cartan(&["verify", "conjecture2", "--m", "1,1,1"]).0, 1);
    assert_eq!(cartan(&["iso", "W(1,(3))'", "H(2,(1,3))"]).0, 1);
    assert_eq!(cartan(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(cartan(&["construct", "Q(1,(2))"]).0, EXIT_USAGE);
    assert_eq!(cartan(&["verify", "special", "--m", "4,1"]).0, EXIT_USAGE);
    assert_eq!(cartan(&["--help"]).0, 0);
}

#[test]
fn construct_writes_a_loadable_file() {
    let path = scratch("s22.json");
    let (code, _, _) = cartan(&["construct", "S(2,(2,2))'", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (l, _) = import_algebra(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(l.dim(), 14);
    let (code, out, _) = cartan(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("sha256:"), "{out}");
}

#[test]
fn certificates_round_trip_and_tampering_is_caught() {
    let cert = scratch("h22.cert.json");
    let cert_arg = cert.to_str().unwrap();
    let (code, out, _) = cartan(&["iso", "H(2,(2,2))", "S(2,(2,2))'", "--out", cert_arg]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = cartan(&["cert-verify", cert_arg]);
    assert_eq!(code, 0);

    // Flip one matrix entry.
    let text = std::fs::read_to_string(&cert).unwrap();
    let at = text.find("\"matrix\"").unwrap()
        + text[text.find("\"matrix\"").unwrap()..]
            .find(['0', '1'])
            .unwrap();
    let mut bytes = text.into_bytes();
    bytes[at] = if bytes[at] == b'0' { b'1' } else { b'0' };
    let tampered = scratch("h22.tampered.json");
    std::fs::write(&tampered, bytes).unwrap();
    let (code, out, _) = cartan(&["cert-verify", tampered.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn hashed_sides_must_be_supplied_and_match() {
    let hamilton = scratch("h22.json");
    let other = scratch("w4.json");
    std::fs::write(&hamilton, export_algebra(family("H(2,(2,2))").algebra())).unwrap();
    std::fs::write(&other, export_algebra(family("W(1,(4))").algebra())).unwrap();
    let cert = scratch("hashed.cert.json");
    let (code, _, _) = cartan(&[
        "iso",
        hamilton.to_str().unwrap(),
        "S(2,(2,2))'",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let c = cert.to_str().unwrap();
    assert_eq!(cartan(&["cert-verify", c]).0, EXIT_USAGE);
    assert_eq!(
        cartan(&["cert-verify", c, "--source", hamilton.to_str().unwrap()]).0,
        0
    );
    let (code, _, err) = cartan(&["cert-verify", c, "--source", other.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("differs"), "{err}");
}
