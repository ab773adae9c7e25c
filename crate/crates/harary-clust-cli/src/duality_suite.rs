//! Property suite behind the `verify-duality` subcommand.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use harary_clust::balance::{
    balanced_resigning, is_balanced, switched_graph, SwitchingFunction,
};
use harary_clust::duality::{
    eigen_symmetric, signed_laplacian, verify_isospectral, zero_eigenvector_bipartition,
};
use harary_clust::graph::{Sign, SignedGraph};

pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Vec<String>>,
}

fn report(name: &'static str, passed: bool, detail: String) -> PropertyReport {
    PropertyReport { name, passed, detail, counterexample: None }
}

fn edge_list(g: &SignedGraph) -> Vec<String> {
    g.edges()
        .iter()
        .map(|e| format!("{} {} {}", g.original_id(e.u), g.original_id(e.v), e.sign))
        .collect()
}

/// Four vertices, five edges: the complete graph minus one edge.
fn diamond(signs: [Sign; 5]) -> SignedGraph {
    let pairs = [(0u32, 1u32), (0, 2), (0, 3), (1, 2), (2, 3)];
    let edges = pairs.iter().zip(signs).map(|(&(u, v), s)| (u, v, s)).collect();
    SignedGraph::from_signed_edges(4, edges, None).unwrap()
}

fn spectrum_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn spectrum(g: &SignedGraph) -> Vec<f64> {
    eigen_symmetric(&signed_laplacian(g, None).unwrap()).unwrap().values
}

fn random_sigma(rng: &mut ChaCha8Rng, n: usize) -> SwitchingFunction {
    SwitchingFunction::from_signs(
        (0..n)
            .map(|_| if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative })
            .collect(),
    )
}

fn random_connected_topology(rng: &mut ChaCha8Rng, n: usize) -> SignedGraph {
    let mut edges: Vec<(u32, u32, Sign)> = Vec::new();
    for v in 1..n as u32 {
        let u = rng.gen_range(0..v);
        edges.push((u, v, Sign::Positive));
    }
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen_bool(0.3) && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
                edges.push((u, v, Sign::Positive));
            }
        }
    }
    SignedGraph::from_signed_edges(n, edges, None).unwrap()
}

pub fn run_suite(
    n_max: usize,
    trials: usize,
    seed: u64,
    fixture: Option<&SignedGraph>,
) -> Vec<PropertyReport> {
    let mut reports = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = [0.0, 2.0, 4.0, 4.0];

    // Reference spectrum of the balanced fixture.
    let all_pos = diamond([Sign::Positive; 5]);
    let values = spectrum(&all_pos);
    let ok = spectrum_close(&values, &reference, 1e-8);
    reports.push(report(
        "reference-spectrum",
        ok,
        format!(
            "balanced fixture spectrum: {}",
            values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" ")
        ),
    ));

    // Every signing of the fixture is either balanced with the reference
    // spectrum or unbalanced with no zero eigenvalue.
    let mut balanced_count = 0;
    let mut partition_ok = true;
    let mut irrational_found = false;
    let irrational = [
        2.0 - 2.0f64.sqrt(),
        3.0 - 3.0f64.sqrt(),
        2.0 + 2.0f64.sqrt(),
        3.0 + 3.0f64.sqrt(),
    ];
    for mask in 0u8..32 {
        let signs: [Sign; 5] = std::array::from_fn(|i| {
            if (mask >> i) & 1 == 0 { Sign::Positive } else { Sign::Negative }
        });
        let g = diamond(signs);
        let values = spectrum(&g);
        if is_balanced(&g).is_some() {
            balanced_count += 1;
            partition_ok &= spectrum_close(&values, &reference, 1e-8);
        } else {
            partition_ok &= values[0] > 1e-8;
            irrational_found |= spectrum_close(&values, &irrational, 1e-8);
        }
    }
    reports.push(report(
        "signing-partition",
        partition_ok,
        format!("{balanced_count}/32 signings balanced, unbalanced ones have no zero eigenvalue"),
    ));
    reports.push(report(
        "irrational-spectrum",
        irrational_found,
        "an unbalanced signing attains the irrational reference spectrum".into(),
    ));

    // Switching invariance on random balanced graphs.
    let mut iso_ok = true;
    let mut magnitude_ok = true;
    let mut iso_bad: Option<Vec<String>> = None;
    for _ in 0..trials {
        let n = rng.gen_range(3..=n_max.max(3));
        let topology = random_connected_topology(&mut rng, n);
        let base_sigma = random_sigma(&mut rng, n);
        let balanced = balanced_resigning(&topology, &base_sigma);
        let s1 = random_sigma(&mut rng, n);
        let s2 = random_sigma(&mut rng, n);
        match verify_isospectral(&balanced, &s1, &s2) {
            Ok(true) => {}
            _ => {
                iso_ok = false;
                iso_bad.get_or_insert_with(|| edge_list(&balanced));
            }
        }
        // Eigenvector magnitudes are preserved entrywise by switching.
        let e1 = eigen_symmetric(&signed_laplacian(&balanced, Some(&s1)).unwrap()).unwrap();
        let e2 = eigen_symmetric(&signed_laplacian(&balanced, Some(&s2)).unwrap()).unwrap();
        for (v1, v2) in e1.vectors.iter().zip(&e2.vectors) {
            if v1.iter().zip(v2).any(|(a, b)| (a.abs() - b.abs()).abs() > 1e-8) {
                magnitude_ok = false;
            }
        }
    }
    let mut iso_report = report(
        "switch-isospectral",
        iso_ok && magnitude_ok,
        format!("{trials} random balanced graphs keep their spectrum under switching"),
    );
    iso_report.counterexample = if iso_ok { None } else { iso_bad };
    reports.push(iso_report);

    // 0-eigenvector bipartition equals the propagation witness.
    let mut zero_ok = true;
    let mut zero_bad: Option<Vec<String>> = None;
    for _ in 0..trials {
        let n = rng.gen_range(3..=n_max.max(3));
        let topology = random_connected_topology(&mut rng, n);
        let balanced = balanced_resigning(&topology, &random_sigma(&mut rng, n));
        let witness = is_balanced(&balanced).expect("resigned graph is balanced");
        let (mut u1, mut w1) = witness.bipartition();
        let Ok((mut u2, mut w2)) = zero_eigenvector_bipartition(&balanced) else {
            zero_ok = false;
            zero_bad.get_or_insert_with(|| edge_list(&balanced));
            continue;
        };
        u1.sort_unstable();
        w1.sort_unstable();
        u2.sort_unstable();
        w2.sort_unstable();
        if !((u1 == u2 && w1 == w2) || (u1 == w2 && w1 == u2)) {
            zero_ok = false;
            zero_bad.get_or_insert_with(|| edge_list(&balanced));
        }
    }
    let mut zero_report = report(
        "zero-eigenvector-bipartition",
        zero_ok,
        format!("{trials} random balanced graphs agree with the propagation witness"),
    );
    zero_report.counterexample = zero_bad;
    reports.push(zero_report);

    // Multiplicity of eigenvalue zero counts balanced components.
    let mut mult_ok = true;
    for components in 1..=3usize {
        let mut edges: Vec<(u32, u32, Sign)> = Vec::new();
        let mut offset = 0u32;
        for _ in 0..components {
            let n = rng.gen_range(2..=4u32);
            for v in 1..n {
                edges.push((
                    offset + v - 1,
                    offset + v,
                    if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative },
                ));
            }
            offset += n;
        }
        let g = SignedGraph::from_signed_edges(offset as usize, edges, None).unwrap();
        let values = spectrum(&g);
        let zeros = values.iter().filter(|v| v.abs() <= 1e-8).count();
        mult_ok &= zeros == components;
    }
    reports.push(report(
        "zero-multiplicity",
        mult_ok,
        "multiplicity of eigenvalue 0 equals the component count (1..3)".into(),
    ));

    // Optional user fixture: it must be balanced and satisfy the duality.
    if let Some(g) = fixture {
        match is_balanced(g) {
            Some(witness) => {
                let identity = SwitchingFunction::all_positive(g.vertex_count());
                let iso = verify_isospectral(g, &identity, &witness).unwrap_or(false);
                let switched = switched_graph(g, &witness);
                let detail = format!(
                    "fixture is balanced; spectrum preserved under its witness switching: {iso}"
                );
                let passed = iso && is_balanced(&switched).is_some();
                let mut rep = report("fixture-duality", passed, detail);
                if !passed {
                    rep.counterexample = Some(edge_list(g));
                }
                reports.push(rep);
            }
            None => {
                let mut rep = report(
                    "fixture-duality",
                    false,
                    "fixture graph is unbalanced; the isospectrality theorem does not apply".into(),
                );
                rep.counterexample = Some(edge_list(g));
                reports.push(rep);
            }
        }
    }
    reports
}
