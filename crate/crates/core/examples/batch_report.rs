//! Writes symbol files and a manifest to a scratch directory and runs the
//! batch report over them, as `whc report manifest.json` would.

use whc::linalg::c;
use whc::report::{run_manifest, write_block, write_symbol};
use whc::{BlockSymbol, LaurentMatrixPoly};

fn main() -> whc::Result<()> {
    let dir = std::env::temp_dir().join(format!("whc-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| whc::Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut runs = Vec::new();
    for gamma in [2.0, -0.5, -1.0] {
        let bs = BlockSymbol::new(
            LaurentMatrixPoly::scalar(0, &[c(1.0, 0.0)]),
            LaurentMatrixPoly::scalar(-1, &[c(1.0, 0.0)]),
            LaurentMatrixPoly::scalar(0, &[c(1.0 + gamma, 0.0)]),
        )?;
        let name = format!("family_{gamma}.json");
        write_block(&dir.join(&name), &bs)?;
        runs.push(serde_json::json!({"file": name, "command": "certify", "theorem": "thcir"}));
        runs.push(serde_json::json!({"file": name, "command": "certify", "theorem": "exact"}));
        runs.push(serde_json::json!({"file": name, "command": "factorize"}));
    }
    write_symbol(&dir.join("t_identity.json"), &LaurentMatrixPoly::identity(2).shift(1))?;
    runs.push(serde_json::json!({"file": "t_identity.json", "command": "factorize", "trunc": 64}));
    runs.push(serde_json::json!({"file": "missing.json", "command": "factorize"}));

    let manifest = dir.join("manifest.json");
    std::fs::write(&manifest, serde_json::json!({ "runs": runs }).to_string()).expect("writable scratch dir");
    let (table, code) = run_manifest(&manifest);
    print!("{}", table?);
    println!("exit code {code}");
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
