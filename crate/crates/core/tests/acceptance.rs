//! Acceptance suite: one PASS/FAIL line per criterion, exact rationals only.
//! Run with `cargo test -p setqm --test acceptance`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use setqm::attributes::{eigenkets, measure_given, measure_probs};
use setqm::density::{entropy_increase, logical_entropy_rho, measure_density, purity, rho_of_partition, rho_of_subset};
use setqm::dsl::{parse, run, run_forced, ParseErrorKind};
use setqm::dynamics::{double_slit, evolve, evolved_frame, Dynamics};
use setqm::entangle::{
    bell_violation, counterfactual_joint, is_independent, is_separated, sequential_pair_prob, JointDistribution,
    ProductUniverse,
};
use setqm::partitions::{logical_entropy, Partition};
use setqm::presets::{
    ab, abc, bell_frames, bell_product, bell_state, chi, double_slit as slit, ordinal, other_bell_state,
    triad_frames,
};
use setqm::qc2::{deutsch, parity_sat, teleport_given, BooleanFunction, DeutschAnswer};
use setqm::setspace::{born, bracket, ket_table, to_basis, BasisFrame, KetTable};
use setqm::{Gf2Matrix, Probability, Rational, Universe};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Check {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn p(n: usize, d: usize) -> Probability {
    Probability::ratio(n, d).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rows_by_first(t: &KetTable) -> BTreeMap<String, Vec<String>> {
    t.rows
        .iter()
        .map(|r| (r[0].to_string(), r.iter().map(ToString::to_string).collect()))
        .collect()
}

fn expected_rows(rows: &[&[&str]]) -> BTreeMap<String, Vec<String>> {
    rows.iter()
        .map(|r| (r[0].to_string(), r.iter().map(|s| s.to_string()).collect()))
        .collect()
}

fn ket_tables() -> Check {
    let t = ket_table(3, &triad_frames()).map_err(|e| e.to_string())?;
    eq(t.rows.len(), 8, "rows of the Z2^3 table")?;
    let want = expected_rows(&[
        &["{a,b,c}", "{c′}", "{a″,b″,c″}"],
        &["{a,b}", "{a′}", "{b″}"],
        &["{b,c}", "{b′}", "{b″,c″}"],
        &["{a,c}", "{a′,b′}", "{c″}"],
        &["{a}", "{b′,c′}", "{a″}"],
        &["{b}", "{a′,b′,c′}", "{a″,b″}"],
        &["{c}", "{a′,c′}", "{a″,c″}"],
        &["∅", "∅", "∅"],
    ]);
    eq(rows_by_first(&t), want, "Z2^3 ket table")?;
    let t = ket_table(2, &bell_frames()).map_err(|e| e.to_string())?;
    eq(t.rows.len(), 4, "rows of the Z2^2 table")?;
    let want = expected_rows(&[
        &["{a,b}", "{a′}", "{a″}"],
        &["{b}", "{b′}", "{a″,b″}"],
        &["{a}", "{a′,b′}", "{b″}"],
        &["∅", "∅", "∅"],
    ]);
    eq(rows_by_first(&t), want, "Z2^2 ket table")
}

fn contextuality() -> Check {
    let [u, _, u2] = triad_frames();
    let ket = abc().subset(&["a", "b"]).unwrap();
    let in_u = born(&ket, &u).unwrap();
    eq(in_u[0].1, p(1, 2), "Pr({a}|{a,b}) in U")?;
    eq(to_basis(&ket, &u2).unwrap().to_string(), "{b″}".to_string(), "{a,b} in U″")?;
    let in_u2 = born(&ket, &u2).unwrap();
    eq(in_u2[0].clone(), ("a″".to_string(), Probability::zero()), "Pr({a″}|{b″}) in U″")
}

fn measurement() -> Check {
    let u = abc();
    let probs = measure_probs(&ordinal(), &u.full()).unwrap();
    eq(probs.values().copied().collect::<Vec<_>>(), vec![p(1, 3); 3], "ordinal on U")?;
    let probs = measure_probs(&chi(&["b", "c"]), &u.full()).unwrap();
    eq((probs[&q(0, 1)], probs[&q(1, 1)]), (p(1, 3), p(2, 3)), "χ_{b,c} on U")?;
    let first = measure_given(&chi(&["b", "c"]), &u.full(), q(1, 1)).unwrap();
    eq(first.post_state.to_string(), "{b,c}".to_string(), "collapse to {b,c}")?;
    let probs = measure_probs(&chi(&["a", "b"]), &first.post_state).unwrap();
    eq((probs[&q(0, 1)], probs[&q(1, 1)]), (p(1, 2), p(1, 2)), "χ_{a,b} on {b,c}")?;
    let second = measure_given(&chi(&["a", "b"]), &first.post_state, q(0, 1)).unwrap();
    eq(second.post_state.to_string(), "{c}".to_string(), "collapse to {c}")?;
    let kets = eigenkets(&[chi(&["b", "c"]), chi(&["a", "b"])]).unwrap();
    eq(kets[2].clone(), ("c".to_string(), vec![q(1, 1), q(0, 1)]), "eigenket of {c}")
}

fn double_slit_check() -> Check {
    let cfg = slit();
    let with: Vec<Probability> = double_slit(&cfg, true).unwrap().into_iter().map(|x| x.1).collect();
    eq(with, vec![p(1, 4), p(1, 2), p(1, 4)], "with slit measurement")?;
    let without: Vec<Probability> = double_slit(&cfg, false).unwrap().into_iter().map(|x| x.1).collect();
    eq(without, vec![p(1, 2), Probability::zero(), p(1, 2)], "without slit measurement")
}

fn census() -> Check {
    let pu = bell_product();
    let entangled: Vec<String> = pu.all_states().filter(|s| !is_separated(s)).map(|s| s.to_string()).collect();
    eq(pu.all_states().filter(is_separated).count(), 9, "separated count")?;
    let mut listed = vec![
        "{(a,a),(b,b)}",
        "{(a,b),(b,a)}",
        "{(a,a),(a,b),(b,a)}",
        "{(a,a),(a,b),(b,b)}",
        "{(a,b),(b,a),(b,b)}",
        "{(a,a),(b,a),(b,b)}",
    ];
    let mut got: Vec<&str> = entangled.iter().map(String::as_str).collect();
    listed.sort();
    got.sort();
    eq(got, listed, "entangled subsets")?;
    let x1 = Universe::new(["x"]).unwrap();
    let x3 = abc();
    for (l, r) in [(ab(), ab()), (x3.clone(), x3.clone()), (ab(), x3.clone()), (x1, x3)] {
        let pu = ProductUniverse::new(l, r);
        for s in pu.all_states() {
            let indep = is_independent(&JointDistribution::equiprobable(&s));
            ensure(is_separated(&s) == indep, || format!("Proposition fails on {s}"))?;
        }
    }
    Ok(())
}

fn bell() -> Check {
    let [u, u1, u2] = bell_frames();
    let s = bell_state();
    let seq = [
        sequential_pair_prob(&s, &u, "a", &u1, "a′").unwrap(),
        sequential_pair_prob(&s, &u1, "b′", &u2, "b″").unwrap(),
        sequential_pair_prob(&s, &u, "a", &u2, "b″").unwrap(),
    ];
    eq(seq, [p(1, 4), Probability::zero(), p(1, 2)], "sequential probabilities")?;
    let joint = counterfactual_joint(&s, &bell_frames()).unwrap();
    eq(joint.prob(0, 0, 0), p(2, 9), "Pr(a,a′,a″)")?;
    ensure(joint.inequality_holds(), || "counterfactual marginals violate".into())?;
    let r = bell_violation(&s).unwrap();
    eq((r.lhs, r.rhs, r.violated), (q(1, 4), q(1, 2), true), "Bell report")?;
    let other = bell_violation(&other_bell_state()).unwrap();
    ensure(other.violated, || format!("other Bell state not violated: {}", other.summary()))
}

fn entropy_density() -> Check {
    for n in 1..=5 {
        let u = Universe::new((0..n).map(|i| format!("e{i}"))).unwrap();
        for part in Partition::all(&u) {
            let rho = rho_of_partition(&part);
            let one_minus_purity = Probability::new(q(1, 1) - purity(&rho).value()).unwrap();
            ensure(logical_entropy(&part) == one_minus_purity, || format!("h ≠ 1 − tr ρ² for {part}"))?;
            ensure(logical_entropy_rho(&rho) == one_minus_purity, || format!("logical_entropy_rho on {part}"))?;
        }
    }
    let u = abc();
    let third = q(1, 3);
    let z = q(0, 1);
    let rho = rho_of_partition(&Partition::parse(&u, "{a,b}|{c}").unwrap());
    eq(
        rho.entries().to_vec(),
        vec![vec![third, third, z], vec![third, third, z], vec![z, z, third]],
        "ρ({a,b}|{c})",
    )?;
    let before = rho_of_subset(&u.full()).unwrap();
    let after = measure_density(&ordinal(), &before).unwrap();
    eq(
        after.entries().to_vec(),
        vec![vec![third, z, z], vec![z, third, z], vec![z, z, third]],
        "ρ̂(U)",
    )?;
    eq(entropy_increase(&before, &after).unwrap(), p(2, 3), "entropy increase")
}

fn nonsingular(n: usize) -> Vec<Gf2Matrix> {
    (0u32..1 << (n * n))
        .map(|bits| {
            let rows: Vec<Vec<u8>> = (0..n)
                .map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as u8).collect())
                .collect();
            Gf2Matrix::from_rows(&rows).unwrap()
        })
        .filter(|m| m.is_nonsingular().unwrap())
        .collect()
}

fn bracket_preservation() -> Check {
    let mut counted = 0;
    for n in 1..=3 {
        let u = Universe::new((0..n).map(|i| format!("e{i}"))).unwrap();
        let canon = BasisFrame::canonical("U", &u);
        let mats = nonsingular(n);
        eq(mats.len(), [1, 6, 168][n - 1], "nonsingular count")?;
        for m in mats {
            let a = Dynamics::new(m).unwrap();
            let au = evolved_frame(&a, &canon).unwrap();
            for s in u.all_subsets() {
                let as_ = to_basis(&evolve(&a, &s).unwrap(), &au).unwrap();
                for t in u.all_subsets() {
                    let at = to_basis(&evolve(&a, &t).unwrap(), &au).unwrap();
                    let before = bracket(&t, &s).unwrap();
                    let after = bracket(&at, &as_).unwrap();
                    ensure(before == after, || format!("bracket changed for {t}, {s}"))?;
                    counted += 1;
                }
            }
        }
    }
    eq(counted, 4 + 6 * 16 + 168 * 64, "cases checked")
}

fn qc2() -> Check {
    for (alpha, beta) in [(true, false), (false, true), (true, true)] {
        let (a, b) = (u8::from(alpha), u8::from(beta));
        for m in 0..2 {
            let t = teleport_given(alpha, beta, m).unwrap();
            eq(t.phi1.coefficients(), vec![a, a, b, b], "φ1")?;
            eq(t.phi2.coefficients(), vec![a, b, b, a], "φ2")?;
            ensure(t.success, || format!("teleport ({a},{b}) branch {m}"))?;
        }
    }
    let mut count = 0;
    for n in 1..=3 {
        for f in BooleanFunction::all(n) {
            let r = parity_sat(&f).unwrap();
            eq(r.parity, f.parity(), &format!("parity of {f}"))?;
            eq(r.ef_applications, 1, "E_f applications")?;
            count += 1;
        }
    }
    eq(count, 4 + 16 + 256, "functions checked")?;
    for f in BooleanFunction::all(1) {
        let s = f.value(0) ^ f.value(1);
        eq(parity_sat(&f).unwrap().pre_measure.coefficients(), vec![s ^ 1, s], "unary result")?;
    }
    Ok(())
}

fn circuit(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "circuits", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn dsl() -> Check {
    for (file, table) in [
        ("deutsch_zero.qc2", "00"),
        ("deutsch_identity.qc2", "01"),
        ("deutsch_not.qc2", "10"),
        ("deutsch_one.qc2", "11"),
    ] {
        let ast = parse(&circuit(file)).map_err(|e| format!("{file}: {e}"))?;
        let f = BooleanFunction::from_bits(table).unwrap();
        let bit = if deutsch(&f).unwrap() == DeutschAnswer::Balanced { "1" } else { "0" };
        for seed in 0..8 {
            let rec = run(&ast, seed).unwrap();
            eq(rec.clone(), run(&ast, seed).unwrap(), "deterministic run")?;
            eq(rec.outcomes, vec![("0".to_string(), bit.to_string())], file)?;
        }
    }
    let ast = parse(&circuit("parity_sat_implication.qc2")).map_err(|e| e.to_string())?;
    let expect = parity_sat(&BooleanFunction::from_bits("1101").unwrap()).unwrap().measured_ket;
    for seed in 0..8 {
        eq(run(&ast, seed).unwrap().outcomes, vec![("all".to_string(), expect.clone())], "parity circuit")?;
    }
    for (file, input) in [("teleport.qc2", vec![1, 1]), ("teleport_one.qc2", vec![0, 1])] {
        let ast = parse(&circuit(file)).map_err(|e| format!("{file}: {e}"))?;
        for m in 0..2 {
            let rec = run_forced(&ast, &[m]).unwrap();
            let trace = teleport_given(input[0] == 1, input[1] == 1, m).unwrap();
            eq(rec.steps[1].state.clone(), trace.phi2.clone(), "φ2 in circuit")?;
            eq(rec.final_state.line_qubit(1).unwrap().coefficients(), input.clone(), file)?;
        }
        for seed in 0..8 {
            let rec = run(&ast, seed).unwrap();
            eq(rec.final_state.line_qubit(1).unwrap().coefficients(), input.clone(), file)?;
        }
    }
    for (src, line, column, kind) in [
        ("lines 1\ninit 0\ngate H9 0", 3, 6, ParseErrorKind::UnknownGate),
        ("lines 2\ninit 00\ngate X 5", 3, 8, ParseErrorKind::LineOutOfRange),
        ("lines 2\ninit 0", 2, 6, ParseErrorKind::Syntax),
        ("lines two", 1, 7, ParseErrorKind::Syntax),
    ] {
        let e = parse(src).err().ok_or_else(|| format!("`{src}` parsed"))?;
        eq((e.line, e.column, e.kind), (line, column, kind), src)?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ket tables reproduced row for row", ket_tables),
        ("contextuality of one abstract ket", contextuality),
        ("attribute measurement and collapse chain", measurement),
        ("double slit with and without slit measurement", double_slit_check),
        ("entanglement census and separated iff independent", census),
        ("Bell inequality violation", bell),
        ("logical entropy equals 1 - tr rho^2; density examples", entropy_density),
        ("brackets preserved under nonsingular dynamics", bracket_preservation),
        ("QC/2 teleportation and Parity SAT", qc2),
        ("circuit files parse, run and reproduce", dsl),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
