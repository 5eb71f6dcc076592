//! End-to-end acceptance criteria, each reported as one PASS/FAIL line.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rootnum::conductor::{classify, Branch};
use rootnum::curves::{genus_plane_model, plane, verify_plane_model, verify_rationality};
use rootnum::hilbert::calibrate::candidates;
use rootnum::hilbert::residues::{c_ell_coeff, c_ell_series_route, c_ell_total, difference_sum};
use rootnum::hilbert::symbol::{branch_multiplier, j_key};
use rootnum::hilbert::{calibrate_j, unit_symbol_exponent, vostokov_check, JTable, JValue, Provenance};
use rootnum::padic::{Measured, Valuation};
use rootnum::root_number::prepare;
use rootnum::tables::{self, all_rows};
use rootnum::{value_of_a, CurveParams, OddPrime, PadicScalar};
use rootnum_cli::record::ReportRecord;
use rootnum_cli::{observations_for, run, select_tables, Command, DeltaRange, Format, RunConfig};
use std::io::Write;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prime(l: u64) -> OddPrime {
    OddPrime::new(l).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn valuations() -> Outcome {
    let start = Instant::now();
    let rows = all_rows();
    for row in &rows {
        let d = value_of_a(&row.params, 8).map_err(|e| e.to_string())?;
        ensure(row.matches(&d), || format!("{}: got {}/{}/{}", row.label(), d.ord_b, d.ord_c, d.ord_b_plus_c))?;
    }
    let took = within(start, Duration::from_millis(100))?;
    Ok(format!("{} rows in {took:?}", rows.len()))
}

/// Case enumeration: returns every branch whose defining condition holds.
fn branch_oracle(ob: Valuation, oc: Valuation, obc: Valuation, l: u64, n: u32) -> Vec<(Branch, u64)> {
    let w = ob.min(oc);
    let fin = |v: Valuation| match v {
        Valuation::Finite(x) => Some(x),
        Valuation::Infinite => None,
    };
    let n64 = n as i64;
    let mut fired = Vec::new();
    if w == Valuation::Finite(0) {
        fired.push((Branch::WZero, l.pow(n - 1) * (l + 1)));
    }
    if let Some(wv) = fin(w).filter(|&x| 1 <= x && x < n64) {
        let wu = wv as u32;
        if obc == w {
            fired.push((Branch::RamifiedEqual(wu), 2 * l.pow(n - wu)));
        }
        if obc > w {
            fired.push((Branch::RamifiedGreater(wu), l.pow(n - wu - 1) * (l - 1)));
        }
    }
    if w == Valuation::Finite(n64) && oc == w && obc == w {
        fired.push((Branch::RamifiedEqual(n), 2));
    }
    if w == Valuation::Finite(n64) && oc == w && obc > w {
        fired.push((Branch::TameTwo, 2));
    }
    let beyond = w == Valuation::Infinite || w > Valuation::Finite(n64);
    if beyond || (w == Valuation::Finite(n64) && oc > w) {
        fired.push((Branch::TrivialTail, 0));
    }
    fired
}

fn classifier() -> Outcome {
    let vals: Vec<Valuation> = (0..=7).map(Valuation::Finite).chain([Valuation::Infinite]).collect();
    let mut checked = 0;
    for l in [3u64, 5] {
        for n in 1..=3u32 {
            for &ob in &vals {
                for &oc in vals.iter().filter(|v| **v != Valuation::Finite(0)) {
                    for &obc in &vals {
                        let w = ob.min(oc);
                        if obc < w || (ob != oc && obc != w) {
                            continue;
                        }
                        let fired = branch_oracle(ob, oc, obc, l, n);
                        ensure(fired.len() == 1, || format!("{ob} {oc} {obc}: {} branches fire", fired.len()))?;
                        let cls = classify(ob, Measured::Exact(oc), Measured::Exact(obc), prime(l), n)
                            .map_err(|e| format!("{ob} {oc} {obc}: {e}"))?;
                        ensure((cls.branch, cls.f) == fired[0], || {
                            format!("ℓ={l} N={n} ({ob},{oc},{obc}): {:?} vs oracle {:?}", (cls.branch, cls.f), fired[0])
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} consistent triples"))
}

fn difference_lemma() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut count = 0;
    for n in 1..=8u64 {
        for deg in 0..n as usize {
            for _ in 0..200 {
                let mut coeffs: Vec<BigInt> = (0..=deg).map(|_| BigInt::from(rng.gen_range(-1000i64..=1000))).collect();
                if coeffs[deg] == BigInt::from(0) {
                    coeffs[deg] = BigInt::from(1);
                }
                let s = difference_sum(&coeffs, n);
                ensure(s == BigInt::from(0), || format!("n={n} f={coeffs:?}: {s}"))?;
                count += 1;
            }
        }
    }
    let cube: Vec<BigInt> = [0, 0, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
    let witness = difference_sum(&cube, 3);
    ensure(witness == BigInt::from(-6), || format!("f = x^3, n = 3 gave {witness}"))?;
    Ok(format!("{count} random polynomials vanish; x^3 at n=3 gives -6"))
}

fn c_ell_values() -> Outcome {
    let start = Instant::now();
    let p3 = prime(3);
    let got: Vec<u64> = [1, 2, 4, 5, 7, 8]
        .iter()
        .map(|&i| c_ell_coeff(&BigInt::from(i), p3, 2).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    ensure(got == [2, 0, 1, 2, 0, 1], || format!("c_3 at (3,2): {got:?}"))?;
    for (l, n) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
        let p = prime(l);
        for i in (1..l.pow(n)).filter(|i| i % l != 0) {
            let i = BigInt::from(i);
            let a = c_ell_coeff(&i, p, n).map_err(|e| e.to_string())?;
            let b = c_ell_series_route(&i, p, n).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("({l},{n}) i={i}: double sum {a}, series {b}"))?;
        }
        let total = c_ell_total(p, n).map_err(|e| e.to_string())?;
        ensure(total == 0, || format!("total at ({l},{n}) is {total} mod {l}"))?;
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("(2,0,1,2,0,1), routes agree, totals vanish, {took:?}"))
}

fn residue_harness() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for l in [5u64, 7] {
        let p = prime(l);
        for j in (1..l * l).filter(|j| j % l != 0) {
            let r = vostokov_check(j, p, 2).map_err(|e| e.to_string())?;
            ensure(r.frobenius_coeff == 0, || format!("ℓ={l} j={j}: [X^ℓ] ε^Δ = {}", r.frobenius_coeff))?;
            ensure(r.low_order_vanishes, || format!("ℓ={l} j={j}: low-order coefficients"))?;
            ensure(r.matches(), || format!("ℓ={l} j={j}: {} vs ℓc_ℓ = {}", r.a_ell, r.ell_c_ell))?;
            count += 1;
        }
    }
    let r = vostokov_check(1, prime(3), 2).map_err(|e| e.to_string())?;
    ensure(!r.matches() && r.a_ell == 1 && r.ell_c_ell == 6, || format!("ℓ=3 j=1: {} vs {}", r.a_ell, r.ell_c_ell))?;
    let expected: Vec<BigInt> = [-3, 12, -8].iter().map(|&x| BigInt::from(x)).collect();
    ensure(r.corrections == expected, || format!("ℓ=3 corrections {:?}", r.corrections))?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("{count} units match at ℓ ∈ {{5,7}}; ℓ=3 mismatch 1 vs 6 with (-3, 12, -8); {took:?}"))
}

fn symbol_consistency() -> Outcome {
    let p = prime(3);
    let c = PadicScalar::from_integer(&BigInt::from(9), p, 8).map_err(|e| e.to_string())?;
    let e = unit_symbol_exponent(&c, 2, Some(JValue::new(0, 1)), 2).map_err(|e| e.to_string())?;
    ensure(e.value == BigUint::from(3u32), || format!("exponent {} mod 9", e.value))?;
    // Closed form at w = N: multiplier −1, times 2 · (c/ℓ^N) · J.
    let m = branch_multiplier(Branch::RamifiedEqual(2), 2).ok_or("no multiplier")?;
    let (c_over_ell_n, j) = (1i64, 1i64);
    let closed = (2 * m * c_over_ell_n * j).rem_euclid(3) as u64;
    ensure(e.to_zeta_ell() == Some(closed), || format!("ζ_3 reduction {:?} vs closed {closed}", e.to_zeta_ell()))?;

    let mut cases = 0;
    for l in [3u64, 5, 7] {
        for n in 1..=4u32 {
            for w in 1..=n {
                let mut branches = vec![(Branch::RamifiedEqual(w), 2 * l.pow(n - w))];
                if w < n {
                    branches.push((Branch::RamifiedGreater(w), l.pow(n - w - 1) * (l - 1)));
                }
                for (b, f) in branches {
                    let prefactor = (1 - f as i64).rem_euclid(l as i64);
                    let m = branch_multiplier(b, n).ok_or_else(|| format!("{b} has no multiplier"))?;
                    ensure(prefactor == m.rem_euclid(l as i64), || format!("ℓ={l} N={n} {b}: {prefactor} vs {m}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("3 mod 9 reduces to 1; {cases} prefactor cases"))
}

fn admissible(l: u64, n: u32) -> Vec<(u64, u64, u64)> {
    let total = l.pow(n);
    let step = l.pow(n - 1);
    let mut out = Vec::new();
    for r in (step..total).step_by(step as usize).filter(|r| !(r / step).is_multiple_of(l)) {
        for s in (1..total - r).filter(|s| s % l != 0) {
            let t = total - r - s;
            if !t.is_multiple_of(l) {
                out.push((r, s, t));
            }
        }
    }
    out
}

fn two_routes() -> Outcome {
    let mut evaluated = 0;
    let mut defined = 0;
    for (l, n, deltas) in [(3u64, 2u32, 1..=40u64), (5, 2, 1..=8), (3, 3, 1..=6), (7, 2, 1..=3)] {
        for (r, s, t) in admissible(l, n) {
            for delta in deltas.clone() {
                let Ok(params) = CurveParams::new(l, n, r, s, t, delta) else { continue };
                let prepared = prepare(&params, None).map_err(|e| format!("{params}: {e}"))?;
                let key = j_key(&prepared.classification, n);
                let mut tables = vec![JTable::new(prime(l))];
                if let Some(k) = key {
                    for j in candidates(l, n) {
                        let mut tb = JTable::new(prime(l));
                        tb.insert(k, j, Provenance::UserSupplied).map_err(|e| e.to_string())?;
                        tables.push(tb);
                    }
                }
                for tb in &tables {
                    for lenient in [false, true] {
                        let report = prepared.evaluate(tb, lenient).map_err(|e| format!("{params}: {e}"))?;
                        if let Some(w_ell) = report.local_ell {
                            let g = report.global.ok_or_else(|| format!("{params}: W_ℓ = {w_ell} but no global"))?;
                            ensure(g == 1 || g == -1, || format!("{params}: global {g}"))?;
                            defined += 1;
                        }
                        evaluated += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{evaluated} evaluations agree ({defined} with real global values)"))
}

fn calibration() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for table in &tables::TABLES {
        let a = calibrate_j(&table.observations(), None, false).map_err(|e| e.to_string())?;
        let b = calibrate_j(&table.observations(), None, false).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{}: calibration is not deterministic", table.name))?;
        ensure(!a.fits.is_empty(), || format!("{}: no key fitted", table.name))?;
        for fit in &a.fits {
            ensure(fit.ties.first() == Some(&fit.chosen), || format!("{}: witness is not the first tie", table.name))?;
        }
        summary.push(format!("{} {}/{}", table.name, a.matched(), a.total()));
    }
    let joint =
        calibrate_j(&observations_for(&select_tables("T2+T3").unwrap()), None, false).map_err(|e| e.to_string())?;
    let cross = joint
        .conflicts
        .iter()
        .find(|c| c.first.starts_with("T2") && c.second.starts_with("T3"))
        .ok_or("T2+T3 reports no cross-table conflict")?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{}; T2+T3 conflict at J({},{}): {} vs {}; {took:?}",
        summary.join(", "),
        cross.key.0,
        cross.key.1,
        cross.first,
        cross.second
    ))
}

fn appendix() -> Outcome {
    let start = Instant::now();
    for (l, genus) in [(3u64, 3u64), (5, 10), (7, 21)] {
        let rational = verify_rationality(l, 2).map_err(|e| e.to_string())?;
        ensure(rational.relation_holds && rational.inverse_holds, || format!("ℓ={l}: rationality"))?;
        ensure(rational.controls.len() == 3 && rational.controls.iter().all(|c| !c.holds), || {
            format!("ℓ={l}: rationality controls {:?}", rational.controls)
        })?;
        let model = verify_plane_model(l, plane::DEFAULT_SEED, plane::DEFAULT_TRIALS).map_err(|e| e.to_string())?;
        ensure(model.identity.exact_holds, || format!("ℓ={l}: plane identity is not exact"))?;
        ensure(model.identity.randomized.holds(), || format!("ℓ={l}: randomized check failed"))?;
        ensure(model.identity.randomized.error_bound_bits > 40, || format!("ℓ={l}: error bound"))?;
        let controls = model.control_summary();
        ensure(controls.len() >= 3 && controls.iter().all(|c| !c.holds), || {
            format!("ℓ={l}: plane controls {controls:?}")
        })?;
        ensure(genus_plane_model(l) == genus, || format!("ℓ={l}: genus {}", genus_plane_model(l)))?;
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("ℓ ∈ {{3,5,7}} verified, controls false, genus 3/10/21; {took:?}"))
}

fn sweep_config(format: Format) -> RunConfig {
    let mut c = RunConfig::new(Command::Sweep).with_params(3, 2, 3, 5, 1, DeltaRange { start: 1, end: 30 });
    c.format = format;
    c
}

fn determinism() -> Outcome {
    let mut configs = vec![sweep_config(Format::Json), sweep_config(Format::Csv), sweep_config(Format::Text)];
    let mut appendix = RunConfig::new(Command::VerifyAppendix);
    appendix.seed = Some(99);
    configs.push(appendix);
    let mut tables = RunConfig::new(Command::VerifyTables);
    tables.format = Format::Csv;
    configs.push(tables);
    for c in &configs {
        let a = run(c);
        let b = run(c);
        ensure(a.status == 0, || format!("{:?}: exit {} {}", c.command, a.status, a.stderr))?;
        ensure(a == b, || format!("{:?} {:?}: output differs between runs", c.command, c.format))?;
    }

    let json = run(&sweep_config(Format::Json)).stdout;
    let csv_out = run(&sweep_config(Format::Csv)).stdout;
    let from_json: Vec<ReportRecord> = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let from_csv: Vec<ReportRecord> = csv::Reader::from_reader(csv_out.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(from_json == from_csv, || "JSON and CSV records differ".into())?;
    ensure(rootnum_cli::emit(&from_csv, Format::Csv).unwrap() == csv_out, || "CSV re-emission differs".into())?;
    ensure(rootnum_cli::emit(&from_json, Format::Json).unwrap() == json, || "JSON re-emission differs".into())?;
    Ok(format!("{} configurations byte-identical; {} records round-trip", configs.len(), from_csv.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("valuation reproduction", valuations),
        ("branch and conductor oracle", classifier),
        ("difference lemma", difference_lemma),
        ("c_ell values", c_ell_values),
        ("residue harness", residue_harness),
        ("unit symbol vs closed form", symbol_consistency),
        ("two-route W_ell agreement", two_routes),
        ("calibration diagnostics", calibration),
        ("curve models", appendix),
        ("determinism and round-trip", determinism),
    ];
    let mut failures = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let line = match check() {
            Ok(detail) => format!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failures.push(i + 1);
                format!("FAIL criterion {} ({name}): {detail}", i + 1)
            }
        };
        let _ = writeln!(err, "{line}");
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
