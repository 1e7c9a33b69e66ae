//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hermform::catalog::{catalog, Catalog, LatticeRef};
use hermform::prover::{verify_catalog, CaseId, CaseProver, HardCase, IngredientKind, ProverConfig};
use hermform::qform::{represented_set, represents, substitution_check, QuadForm, RepSet, Substitution};
use hermform::report::Report;
use hermform::transfer::{match_transfer, transfer, PrintedForm};

type Outcome = Result<String, String>;

fn form(s: &str) -> QuadForm {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lattice(sel: &str) -> hermform::hermitian::HermLattice {
    Catalog::builtin().get(sel.parse::<LatticeRef>().unwrap()).unwrap().clone()
}

fn theorem_proxy() -> Outcome {
    let start = Instant::now();
    let lattices = catalog();
    ensure(lattices.len() == 25, format!("catalog has {} entries", lattices.len()))?;
    for l in &lattices {
        let q = transfer(l).map_err(|e| e.to_string())?;
        let set = represented_set(&q, 2000).map_err(|e| e.to_string())?;
        let first = set.missing().next();
        if let Some(n) = first {
            return Err(format!("{} over Q(√-{}) misses {n}", l.label(), l.ctx().m()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("25/25 transfer forms represent 1..2000 ({secs:.2}s)"))
}

fn fifteen() -> Outcome {
    for l in catalog() {
        let q = transfer(&l).map_err(|e| e.to_string())?;
        for n in 1..=15 {
            ensure(
                represents(&q, n).map_err(|e| e.to_string())?.is_some(),
                format!("{} over Q(√-{}) misses {n}", l.label(), l.ctx().m()),
            )?;
        }
    }
    Ok("every transfer form represents 1..15".into())
}

fn printed_match() -> Outcome {
    let pairs = [
        ("7:2", PrintedForm::F72),
        ("7:3", PrintedForm::F73),
        ("11:1", PrintedForm::F11),
        ("15:1", PrintedForm::F15),
        ("19:1", PrintedForm::F19),
        ("23:1", PrintedForm::F23),
        ("23:2", PrintedForm::F23),
        ("31:1", PrintedForm::F31),
        ("31:2", PrintedForm::F31),
    ];
    for (sel, p) in pairs {
        match_transfer(&lattice(sel), &p.form(), 500).map_err(|e| format!("{sel}: {e}"))?;
    }
    for (a, b) in [("23:1", "23:2"), ("31:1", "31:2")] {
        let sa = represented_set(&transfer(&lattice(a)).unwrap(), 500).unwrap();
        let sb = represented_set(&transfer(&lattice(b)).unwrap(), 500).unwrap();
        ensure(sa == sb, format!("{a} and {b} differ at {:?}", sa.first_difference(&sb)))?;
    }
    Ok("seven printed forms matched; Q(√-23) and Q(√-31) pairs coincide up to 500".into())
}

fn f15_identity() -> Outcome {
    let t = Substitution::from_rows(vec![
        vec![0, 2, 3, 0],
        vec![1, 0, 0, 3],
        vec![1, 0, 0, -2],
        vec![0, 1, -1, 0],
    ])
    .unwrap();
    ensure(t.to_string() == "(2y+3z, x+3w, x-2w, y-z)", t.to_string())?;
    let f = form("x^2+2y^2+2z^2+4w^2+xw+yz");
    ensure(substitution_check(&f, &t, 5).unwrap(), "identity fails")?;
    Ok("f15(2y+3z, x+3w, x-2w, y-z) = 5·f15 exactly".into())
}

fn doubling() -> Outcome {
    let config = ProverConfig {
        limit: 50,
        genus_limit: 100,
        ..ProverConfig::default()
    };
    let mut notes = Vec::new();
    for h in [HardCase::F23, HardCase::F31] {
        let p = CaseProver::build(CaseId::Hard(h), &config).map_err(|e| e.to_string())?;
        let rec = p
            .scalings()
            .iter()
            .find(|r| r.lambda == 2)
            .ok_or("no λ=2 record")?;
        let t = rec.substitution.as_ref().ok_or(format!("{}: no λ=2 substitution", h.tag()))?;
        ensure(t.max_abs_entry() <= 4, format!("{}: entries exceed 4", h.tag()))?;
        ensure(substitution_check(p.form(), t, 2).unwrap(), "recovered map fails")?;
        let printed_holds = rec.printed_holds.ok_or("printed outcome not recorded")?;
        let printed = rec.printed.as_ref().unwrap();
        ensure(
            substitution_check(p.form(), printed, 2).unwrap() == printed_holds,
            "recorded printed outcome disagrees with the symbolic check",
        )?;
        notes.push(format!(
            "{}: printed {printed} {}, using {t}",
            h.tag(),
            if printed_holds { "holds" } else { "fails" }
        ));
    }
    let summary = verify_catalog(
        &Catalog::parse("m=23; blocks=U(1),F(2; 0,1; 3); label=a\nm=31; blocks=U(1),F(2; 0,1; 4); label=b").unwrap(),
        &config,
    )
    .map_err(|e| e.to_string())?;
    let report = Report::new(summary);
    ensure(
        report.printed_substitutions.iter().filter(|p| p.lambda == 2).count() == 2,
        "report lacks the printed λ=2 outcomes",
    )?;
    Ok(notes.join("; "))
}

fn covered(sets: &[RepSet], n: u64) -> bool {
    sets.iter().any(|s| s.contains(n))
}

fn genus_scans() -> Outcome {
    const N: u64 = 5000;
    type Filter = fn(u64) -> bool;
    let claims: [(&str, &[&str], Filter); 7] = [
        ("f7,2", &["x^2+9y^2+15z^2+6yz", "3x^2+6y^2+7z^2"], |n| n % 3 != 2 && n % 7 != 0),
        ("f7,3", &["x^2+3y^2+7z^2", "2x^2+3y^2+4z^2+2xz"], |n| n % 3 != 0),
        ("f11", &["x^2+y^2+11z^2", "x^2+3y^2+4z^2+2yz"], |n| n % 11 != 0),
        ("f15", &["x^2+2y^2+8z^2+2yz", "x^2+3y^2+5z^2"], |n| n % 5 != 0),
        ("f19", &["2x^2+5y^2+25z^2+5yz", "3x^2+7y^2+13z^2+3yz+xz+3xy"], |n| {
            n % 2 == 1 && matches!(n % 5, 0 | 2 | 3)
        }),
        // the descent uses g itself: g = x^2+2y^2+3z^2+yz
        ("f23", &["x^2+2y^2+3z^2+yz"], |n| n % 4 <= 1 && n % 23 != 0),
        ("f31", &["x^2+4y^2+32z^2+4yz", "x^2+8y^2+16z^2+4yz", "4x^2+5y^2+8z^2+4yz+4xz"], |n| {
            n % 4 <= 1 && n % 31 != 0
        }),
    ];
    for (name, forms, accepts) in claims {
        let sets: Vec<RepSet> = forms.iter().map(|f| represented_set(&form(f), N).unwrap()).collect();
        if let Some(n) = (1..=N).find(|&n| accepts(n) && !covered(&sets, n)) {
            return Err(format!("{name}: {n} not represented"));
        }
    }
    let config = ProverConfig::default();
    for h in HardCase::ALL {
        let p = CaseProver::build(CaseId::Hard(h), &config).map_err(|e| e.to_string())?;
        for i in p.ingredients().iter().filter(|i| i.kind == IngredientKind::GenusScan) {
            ensure(i.holds, format!("{}: {} ({})", h.tag(), i.claim, i.detail))?;
        }
    }
    Ok(format!("seven scans to {N}, zero exceptions"))
}

fn base_bounds() -> Outcome {
    let checks = [
        ("f7,2", PrintedForm::F72.form(), 14),
        ("Q(√-19) transfer", transfer(&lattice("19:1")).unwrap(), 154),
        ("f23", PrintedForm::F23.form(), 23),
        ("f31", PrintedForm::F31.form(), 31),
    ];
    for (name, q, bound) in checks {
        let set = represented_set(&q, bound).unwrap();
        let first = set.missing().next();
        if let Some(n) = first {
            return Err(format!("{name} misses {n} ≤ {bound}"));
        }
    }
    let config = ProverConfig {
        limit: 10,
        genus_limit: 50,
        ..ProverConfig::default()
    };
    for (h, bound) in [(HardCase::F72, 14), (HardCase::F19, 154), (HardCase::F23, 23), (HardCase::F31, 31)] {
        let p = CaseProver::build(CaseId::Hard(h), &config).map_err(|e| e.to_string())?;
        let base = p
            .ingredients()
            .iter()
            .find(|i| i.kind == IngredientKind::BaseCases)
            .ok_or("missing base-case ingredient")?;
        ensure(
            base.claim.ends_with(&format!("≤ {bound}")) && base.holds,
            format!("{}: {}", h.tag(), base.claim),
        )?;
    }
    Ok("base tables 1..14, 1..154, 1..23, 1..31 complete".into())
}

fn prover_soundness() -> Outcome {
    let config = ProverConfig::default();
    let mut total = 0;
    for h in HardCase::ALL {
        let p = CaseProver::build(CaseId::Hard(h), &config).map_err(|e| e.to_string())?;
        let reps = represented_set(p.form(), config.limit).unwrap();
        for n in 1..=config.limit {
            let proved = match p.prove(n) {
                Ok(t) => {
                    let w = t.replay().map_err(|e| format!("{} {n}: {e}", h.tag()))?;
                    let v = p.form().eval(&w.0).unwrap();
                    ensure(v == n as i128, format!("{} {n}: witness evaluates to {v}", h.tag()))?;
                    true
                }
                Err(_) => false,
            };
            ensure(
                proved == reps.contains(n),
                format!("{} {n}: prover {proved}, enumerator {}", h.tag(), reps.contains(n)),
            )?;
            ensure(proved, format!("{} {n}: no trace", h.tag()))?;
            total += 1;
        }
    }
    Ok(format!("{total} traces replayed exactly, prover and enumerator agree"))
}

fn det4(a: &[[i128; 4]; 4]) -> i128 {
    // Leibniz expansion over the 24 permutations
    let mut total = 0;
    let mut perm = [0usize, 1, 2, 3];
    fn heap(k: usize, perm: &mut [usize; 4], a: &[[i128; 4]; 4], total: &mut i128) {
        if k == 1 {
            let mut inversions = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            *total += sign * (0..4).map(|i| a[i][perm[i]]).product::<i128>();
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, a, total);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(4, &mut perm, a, &mut total);
    total
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(a: &[[i128; 4]; 4], skip: usize) -> i128 {
    let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
    let mut m = [[0i128; 3]; 3];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            m[r][c] = a[i][j];
        }
    }
    det3(m)
}

/// Lexicographically smallest witness for every `n ≤ limit`, by scanning the
/// box `x_i² · det(A) ≤ 2·limit · cof_ii(A)` in lexicographic order.
fn box_oracle(q: &QuadForm, limit: u64) -> Vec<Option<Vec<i64>>> {
    let g = q.doubled_gram();
    let mut a = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            a[i][j] = g[i][j] as i128;
        }
    }
    let det = det4(&a);
    let bounds: Vec<i64> = (0..4)
        .map(|i| {
            let rhs = 2 * limit as i128 * minor(&a, i);
            let mut b = 0i64;
            while ((b + 1) as i128).pow(2) * det <= rhs {
                b += 1;
            }
            b
        })
        .collect();
    let mut best: Vec<Option<Vec<i64>>> = vec![None; limit as usize + 1];
    for x0 in -bounds[0]..=bounds[0] {
        for x1 in -bounds[1]..=bounds[1] {
            for x2 in -bounds[2]..=bounds[2] {
                for x3 in -bounds[3]..=bounds[3] {
                    let x = [x0, x1, x2, x3];
                    let v = q.eval(&x).unwrap();
                    if v >= 1 && v <= limit as i128 && best[v as usize].is_none() {
                        best[v as usize] = Some(x.to_vec());
                    }
                }
            }
        }
    }
    best
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut forms = Vec::new();
    while forms.len() < 20 {
        let mut q = QuadForm::zero(4);
        for i in 0..4 {
            for j in i..4 {
                q.set(i, j, rng.gen_range(1..=10));
            }
        }
        if q.is_positive_definite() {
            forms.push(q);
        }
    }
    let mut checked = 0;
    for q in &forms {
        let oracle = box_oracle(q, 200);
        for n in 1..=200u64 {
            let got = represents(q, n).unwrap().map(|w| w.0);
            ensure(
                got == oracle[n as usize],
                format!("{q} at {n}: engine {got:?}, box search {:?}", oracle[n as usize]),
            )?;
            checked += 1;
        }
    }
    Ok(format!("20 random forms, {checked} queries, zero disagreements"))
}

fn negative_control() -> Outcome {
    let q = form("x^2+y^2+4z^2+4w^2");
    let oracle = box_oracle(&q, 10);
    let first_missing = (1..=10).find(|&n| oracle[n].is_none());
    ensure(first_missing == Some(3), format!("box search gives {first_missing:?}"))?;

    let bad = Catalog::parse("m=1; blocks=U(1),U(1); label=<1,1>\nm=1; blocks=U(1),U(4); label=<1,4>").unwrap();
    let config = ProverConfig {
        limit: 2000,
        ..ProverConfig::default()
    };
    let summary = verify_catalog(&bad, &config).map_err(|e| e.to_string())?;
    ensure(!summary.passed, "corrupted catalog passed")?;
    let entry = &summary.lattices[1];
    ensure(entry.transfer == q, format!("transfer is {}", entry.transfer))?;
    ensure(entry.case.is_none(), "uncatalogued lattice was assigned a case")?;
    ensure(!entry.passed && entry.first_exception == Some(3), format!("{entry:?}"))?;
    ensure(summary.lattices[0].passed, "control lattice <1,1> failed")?;
    Ok("x^2+y^2+4z^2+4w^2 rejected with first exception 3".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("theorem proxy: 25 transfer forms represent 1..2000", theorem_proxy),
        ("fifteen check", fifteen),
        ("printed-form match", printed_match),
        ("f15 scaling identity", f15_identity),
        ("λ=2 scalings for f23 and f31", doubling),
        ("genus-consequence scans to 5000", genus_scans),
        ("base-case bounds", base_bounds),
        ("prover soundness and completeness to 2000", prover_soundness),
        ("enumerator oracle equivalence", oracle_equivalence),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
