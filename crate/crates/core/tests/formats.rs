use serde_json::json;

use srres_core::fixtures;
use srres_core::formats::{parse_complex, ComplexFile, ReportFile};
use srres_core::{Error, FieldSpec, SimplicialComplex};

#[test]
fn complex_files() {
    let k = parse_complex(r#"{"m": 4, "nonfaces": [[1,3],[2,4]]}"#).unwrap();
    assert_eq!(k, fixtures::complex("four_cycle"));
    let again = parse_complex(&serde_json::to_string(&ComplexFile::from_complex(&k)).unwrap()).unwrap();
    assert_eq!(again, k);
    for name in fixtures::NAMES {
        let k = fixtures::complex(name);
        let text = serde_json::to_string(&ComplexFile::from_complex(&k)).unwrap();
        assert_eq!(parse_complex(&text).unwrap(), k, "{name}");
    }
}

#[test]
fn complex_file_errors() {
    assert!(matches!(parse_complex("{"), Err(Error::Json(_))));
    assert!(matches!(parse_complex(r#"{"m": 2}"#), Err(Error::InvalidInput(_))));
    assert!(matches!(parse_complex(r#"{"m": 2, "facets": [[1]], "nonfaces": [[1,2]]}"#), Err(Error::InvalidInput(_))));
    assert!(matches!(parse_complex(r#"{"m": 2, "faces": [[1]]}"#), Err(Error::Json(_))));
    assert_eq!(parse_complex(r#"{"m": 21, "facets": []}"#), Err(Error::TooManyVertices(21)));
    assert_eq!(parse_complex(r#"{"m": 2, "facets": [[0]]}"#), Err(Error::VertexOutOfRange { vertex: 0, m: 2 }));
    assert_eq!(parse_complex(r#"{"m": 3, "facets": [[3,1]]}"#), Err(Error::UnsortedFace(vec![3, 1])));
    // a single line each, for the command line
    for e in [parse_complex("{").unwrap_err(), Error::TooManyVertices(21)] {
        assert!(!e.to_string().contains('\n'));
    }
    assert!(SimplicialComplex::from_facets(2, &[]).unwrap().is_void());
}

#[test]
fn field_names() {
    assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
    assert_eq!("f7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
    assert_eq!(FieldSpec::Prime(7).to_string(), "f7");
    assert_eq!(FieldSpec::Rationals.to_string(), "q");
    assert!(matches!("f4".parse::<FieldSpec>(), Err(Error::InvalidPrime(4))));
    assert!(matches!("z".parse::<FieldSpec>(), Err(Error::InvalidField(_))));
}

#[test]
fn report_digest() {
    let cmd = vec!["betti".to_string(), "k.json".to_string()];
    let r = ReportFile::new(cmd.clone(), "q".into(), json!({"betti": [1, 2, 1]}));
    assert!(r.verify_digest());
    assert_eq!(r.digest.len(), 64);
    assert_eq!(r, ReportFile::new(cmd, "q".into(), json!({"betti": [1, 2, 1]})));
    let back: ReportFile = serde_json::from_str(&r.to_pretty()).unwrap();
    assert!(back.verify_digest());
    assert_eq!(back, r);

    let mut tampered = r.clone();
    tampered.results = json!({"betti": [1, 2, 2]});
    assert!(!tampered.verify_digest());
    let mut tampered = r.clone();
    tampered.field = "f2".into();
    assert!(!tampered.verify_digest());
}
