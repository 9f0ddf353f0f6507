//! The committed gap fixtures: which real/complex gaps the repository
//! pins, where the files live, and how `fixtures regenerate` / `check`
//! keep them honest against a fresh oracle rebuild.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use opnorm_core::counterexample::{build_gap_fixture, GapFixture, MatrixId};
use opnorm_core::Exponent;

use crate::io;

fn fin(v: f64) -> Exponent {
    Exponent::finite(v).expect("static exponent")
}

/// The default fixture set: the classic 2x2 sup-to-1 gap, the 6x3 sign
/// matrix at two exponent pairs with p > q, and the 3x6 transposes at
/// the dual pairs. Densities are chosen so ten oracle resolutions sit
/// well below each gap while a full rebuild stays fast.
pub fn default_specs() -> Vec<(MatrixId, Exponent, Exponent, usize)> {
    vec![
        (MatrixId::A2x2, Exponent::Inf, fin(1.0), 1000),
        (MatrixId::A6x3, fin(3.0), fin(1.5), 3000),
        (MatrixId::A6x3, fin(4.0), fin(1.5), 3000),
        (MatrixId::A3x6, fin(3.0), fin(1.5), 3000),
        (MatrixId::A3x6, fin(3.0), fin(4.0 / 3.0), 3000),
    ]
}

/// `OPNORM_FIXTURES_DIR` overrides the default `fixtures/` directory;
/// this is the only environment variable the CLI reads.
pub fn fixtures_dir() -> PathBuf {
    match std::env::var_os("OPNORM_FIXTURES_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from("fixtures"),
    }
}

/// Exponents rendered for file names: `inf`, or at most six decimals
/// with trailing zeros trimmed (`1.5`, `1.333333`).
fn exponent_slug(e: Exponent) -> String {
    match e {
        Exponent::Inf => "inf".to_string(),
        Exponent::Finite(v) => {
            let s = format!("{:.6}", v);
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        }
    }
}

pub fn fixture_file_name(id: MatrixId, p: Exponent, q: Exponent) -> String {
    format!("{}_p{}_q{}.json", id, exponent_slug(p), exponent_slug(q))
}

pub fn fixture_json(f: &GapFixture) -> Value {
    json!({
        "matrix_id": f.matrix_id.to_string(),
        "p": io::exponent_json(f.p),
        "q": io::exponent_json(f.q),
        "matrix": io::matrix_json(&f.matrix),
        "real_norm": f.real_norm,
        "complex_norm": f.complex_norm,
        "gap": f.gap,
        "real_witness": io::vector_json(&f.real_witness),
        "complex_witness": io::vector_json(&f.complex_witness),
        "provenance": {
            "oracle_density": f.provenance.oracle_density,
            "oracle_resolution": f.provenance.oracle_resolution,
            "richardson_delta": f.provenance.richardson_delta,
            "method": f.provenance.method.to_string(),
        },
    })
}

pub fn build(id: MatrixId, p: Exponent, q: Exponent, density: usize) -> Result<GapFixture> {
    build_gap_fixture(id, p, q, density)
        .map_err(|e| anyhow!("building {} at ({}, {}): {}", id, p, q, e))
}

/// Rebuild every default fixture from the oracle and write it out.
pub fn regenerate(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating fixture directory {}", dir.display()))?;
    let mut written = Vec::new();
    for (id, p, q, density) in default_specs() {
        let fixture = build(id, p, q, density)?;
        let path = dir.join(fixture_file_name(id, p, q));
        io::write_json_file(&path, &fixture_json(&fixture))?;
        written.push(path);
    }
    Ok(written)
}

/// Recompute each fixture and compare against the stored file. Rebuilds
/// are deterministic, so honest files agree to the last bit; any missing
/// file or drifted field fails with its name.
pub fn check(dir: &Path) -> Result<usize> {
    let mut checked = 0;
    for (id, p, q, density) in default_specs() {
        let name = fixture_file_name(id, p, q);
        let path = dir.join(&name);
        if !path.exists() {
            bail!("missing fixture file {}", path.display());
        }
        let stored = io::read_json_file(&path)?;
        let rebuilt = fixture_json(&build(id, p, q, density)?);
        compare_json(&name, "", &rebuilt, &stored)?;
        checked += 1;
    }
    Ok(checked)
}

/// Structural comparison with a small numeric tolerance (1e-6 relative
/// to scale); far below any stored gap, far above honest rebuild drift.
// The negated comparison treats NaN on either side as a mismatch.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn compare_json(file: &str, at: &str, expected: &Value, stored: &Value) -> Result<()> {
    let here = |key: &str| {
        if at.is_empty() {
            key.to_string()
        } else {
            format!("{}.{}", at, key)
        }
    };
    match (expected, stored) {
        (Value::Object(a), Value::Object(b)) => {
            for (key, want) in a {
                let got = b
                    .get(key)
                    .ok_or_else(|| anyhow!("{}: missing field {}", file, here(key)))?;
                compare_json(file, &here(key), want, got)?;
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                bail!(
                    "{}: field {} has length {}, expected {}",
                    file,
                    at,
                    b.len(),
                    a.len()
                );
            }
            for (i, (want, got)) in a.iter().zip(b).enumerate() {
                compare_json(file, &format!("{}[{}]", at, i), want, got)?;
            }
            Ok(())
        }
        (Value::Number(a), Value::Number(b)) => {
            let want = a.as_f64().unwrap_or(f64::NAN);
            let got = b.as_f64().unwrap_or(f64::NAN);
            if !((want - got).abs() <= 1e-6 * want.abs().max(1.0)) {
                bail!(
                    "{}: field {} mismatch: stored {}, recomputed {}",
                    file,
                    at,
                    got,
                    want
                );
            }
            Ok(())
        }
        _ => {
            if expected != stored {
                bail!(
                    "{}: field {} mismatch: stored {}, recomputed {}",
                    file,
                    at,
                    stored,
                    expected
                );
            }
            Ok(())
        }
    }
}
