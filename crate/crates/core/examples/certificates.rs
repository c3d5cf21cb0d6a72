//! Every certifier on the family `A = 1`, `B = t⁻¹`, `D = 1 + γ`, next to
//! the exact criterion: the sufficient conditions cover part of the
//! canonical range, and none of them fires where factorization breaks.

use whc::certify::{
    certify_cocont, certify_cok1, certify_thcan, certify_thcir, certify_thneg, exact_gamma_criterion, CertifyOptions,
};
use whc::linalg::c;
use whc::{BlockSymbol, Certificate, LaurentMatrixPoly};

fn family(gamma: f64) -> whc::Result<BlockSymbol> {
    BlockSymbol::new(
        LaurentMatrixPoly::scalar(0, &[c(1.0, 0.0)]),
        LaurentMatrixPoly::scalar(-1, &[c(1.0, 0.0)]),
        LaurentMatrixPoly::scalar(0, &[c(1.0 + gamma, 0.0)]),
    )
}

fn cell(cert: &Certificate) -> String {
    let v = serde_json::to_value(cert.verdict).expect("serializable");
    match &cert.pinterval {
        Some(p) if p.phi.is_finite() => format!("{} p∈({:.3},{:.3})", v.as_str().unwrap(), p.plo, p.phi),
        _ => v.as_str().unwrap().to_string(),
    }
}

fn main() -> whc::Result<()> {
    let opts = CertifyOptions::default();
    println!(
        "{:>6} | {:<22} | {:<22} | {:<6} | {:<6} | {:<6} | exact",
        "γ", "thcan", "cocont", "thcir", "thneg", "cok1"
    );
    for gamma in [3.0, 2.0, 0.5, 0.1, -0.5, -0.99, -1.0, -1.01, -1.5, -3.0] {
        let bs = family(gamma)?;
        let exact = exact_gamma_criterion(bs.b(), c(gamma, 0.0));
        let exact_text = if exact.claims_canonical() {
            "canonical".to_string()
        } else {
            format!("{:?}", exact.claims)
        };
        println!(
            "{gamma:>6} | {:<22} | {:<22} | {:<6} | {:<6} | {:<6} | {exact_text}",
            cell(&certify_thcan(&bs, &opts)?),
            cell(&certify_cocont(&bs, &opts)?),
            cell(&certify_thcir(&bs, &opts)?),
            cell(&certify_thneg(&bs, None, &opts)?),
            cell(&certify_cok1(&bs, &opts)?),
        );
    }
    let mut cert = certify_thcir(&family(2.0)?, &opts)?;
    cert.details.margins.truncate(4);
    println!("\n{}", serde_json::to_string_pretty(&cert).expect("serializable"));
    Ok(())
}
