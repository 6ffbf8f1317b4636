use basilica_core::cells::Filtration;
use basilica_core::decimation::{
    eigenfunction, eigenfunction_csv, graph_spectrum, DecimationParams,
};
use basilica_core::forms::{measure_csv, MeasureKind, Network, ResistanceScheme};
use basilica_core::geometry::{backward_orbit, layout_cells, scatter_csv};
use basilica_core::graphdir;
use basilica_core::spectra::{counting_csv, dirichlet_spectrum, fractal_counting, fractal_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn graph_documents_share_a_shape() {
    let cells = serde_json::to_value(Filtration::build(2).unwrap().graph().document()).unwrap();
    let directed = parse(&graphdir::generate(2).unwrap().to_json().unwrap());
    for doc in [&cells, &directed] {
        assert!(doc["level"].is_u64());
        assert!(doc["vertices"].is_array());
        for key in ["u", "v", "address", "kind"] {
            assert!(doc["edges"][0].get(key).is_some(), "{key}");
        }
    }
    for key in ["label", "mass", "resistance"] {
        assert!(directed["edges"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn spectrum_total_multiplicity_at_level_three() {
    let params = DecimationParams::new(0.25, 0.25).unwrap();
    let doc = parse(&graph_spectrum(3, &params).unwrap().to_json().unwrap());
    let total: u64 = doc
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["mult"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 54);
}

#[test]
fn csv_headers() {
    let params = DecimationParams::new(0.25, 0.25).unwrap();
    let s = graph_spectrum(2, &params).unwrap();
    let v = &eigenfunction(&s.atoms[1], 2, &params).unwrap()[0];
    let net = Network::new(ResistanceScheme::Dyadic, 1).unwrap();
    let atoms = dirichlet_spectrum(2).unwrap();
    let cases = [
        (eigenfunction_csv(v).unwrap(), "vertex_id,value"),
        (scatter_csv(&backward_orbit(3).unwrap()).unwrap(), "re,im"),
        (layout_cells(2).unwrap().to_csv().unwrap(), "vertex_id,x,y"),
        (counting_csv(&fractal_counting(&atoms)).unwrap(), "lambda,N"),
        (net.resistance_csv().unwrap(), ""),
        (
            measure_csv(2, MeasureKind::Balanced, &ResistanceScheme::conformal()).unwrap(),
            "",
        ),
    ];
    for (csv, header) in cases {
        assert!(csv.lines().next().unwrap().starts_with(header), "{csv}");
        assert!(csv.lines().count() > 1);
    }
}

#[test]
fn outputs_are_deterministic() {
    let a = fractal_json(&dirichlet_spectrum(4).unwrap()).unwrap();
    let b = fractal_json(&dirichlet_spectrum(4).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        scatter_csv(&backward_orbit(8).unwrap()).unwrap(),
        scatter_csv(&backward_orbit(8).unwrap()).unwrap()
    );
}
