use rand::SeedableRng;
use serde_json::{json, Value};
use submodkit::formats::{self, CodeSetFile, FamilySpec, SetFnFile};
use submodkit::hypercube::{self, CodeSet};
use submodkit::inequality_lab::{self, Claim, InfoSequence, ScalarTransform, SequenceReport};
use submodkit::infomeasures::{self, JointPmf};
use submodkit::oracle::{self, OracleRng};
use submodkit::setfn::{self, SetFunction, SubsetFamily};
use submodkit::{Check, Error};

use crate::report::{fmt_values, to_value, Report};
use crate::Common;

type Out = Result<Report, String>;

fn lib<T>(r: submodkit::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

enum Input {
    SetFn(SetFnFile),
    Pmf(JointPmf),
    Points(Vec<Vec<i64>>),
    Codes(CodeSetFile),
}

fn read(c: &Common) -> Result<String, String> {
    std::fs::read_to_string(&c.input).map_err(|e| format!("cannot read {}: {e}", c.input.display()))
}

/// Decides the format from the first significant line: a `setfn` or `pmf`
/// header, several integers (points) or a single word (code set).
fn load(c: &Common) -> Result<Input, String> {
    let text = read(c)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .ok_or_else(|| format!("{} has no content", c.input.display()))?;
    let head = first.split_whitespace().next().unwrap_or("");
    Ok(match head {
        "setfn" => Input::SetFn(lib(formats::parse_setfn(&text))?),
        "pmf" => Input::Pmf(lib(formats::parse_pmf(&text))?),
        _ if first.split_whitespace().count() > 1 => {
            Input::Points(lib(formats::parse_points(&text))?)
        }
        _ => Input::Codes(lib(formats::parse_code_set(&text))?),
    })
}

fn load_setfn(c: &Common) -> Result<SetFnFile, String> {
    match load(c)? {
        Input::SetFn(f) => Ok(f),
        _ => Err("expected a set-function file (header `setfn n=<n>`)".into()),
    }
}

fn load_codes(c: &Common) -> Result<CodeSet, String> {
    match load(c)? {
        Input::Codes(file) => {
            for w in &file.warnings {
                eprintln!("warning: {w}");
            }
            Ok(file.set)
        }
        _ => Err("expected a code-set file (one +/- or 1/0 word per line)".into()),
    }
}

fn transform(c: &Common) -> Result<ScalarTransform, String> {
    match &c.g {
        None => Ok(ScalarTransform::Identity),
        Some(s) => lib(s.parse()),
    }
}

fn check_tol(c: &Common) -> Result<(), String> {
    if !(c.tol.is_finite() && c.tol >= 0.0) {
        return Err(format!(
            "--tol must be a non-negative number, got {}",
            c.tol
        ));
    }
    Ok(())
}

pub fn check_setfn(c: &Common, sequences: bool) -> Out {
    check_tol(c)?;
    let file = load_setfn(c)?;
    let mut rep = Report::new("check-setfn");
    predicates_section(&mut rep, &file.f, c)?;
    if sequences {
        tk_section(&mut rep, &file.f, c)?;
    }
    Ok(rep)
}

fn predicates_section(rep: &mut Report, f: &SetFunction, c: &Common) -> Result<(), String> {
    rep.put("n", f.n());
    rep.heading(&format!("predicates (n = {})", f.n()));
    let verdicts = [
        f.is_submodular(c.tol),
        f.is_supermodular(c.tol),
        f.is_monotone_increasing(c.tol),
        f.is_subadditive(c.tol),
        f.is_nonnegative(c.tol),
        f.is_rank_function(c.tol),
    ];
    let mut rows = Vec::new();
    for v in &verdicts {
        let witness = v.witness.map(|w| w.describe(f.ground()));
        match &witness {
            None => rep.line(format!("  {:<26} yes", v.predicate.to_string())),
            Some(w) => rep.line(format!(
                "  {:<26} no   worst shortfall {:.6e} at {w}",
                v.predicate.to_string(),
                v.worst_violation
            )),
        }
        let mut row = to_value(v);
        row["witness_text"] = to_value(&witness);
        rows.push(row);
    }
    rep.put("predicates", rows);
    if c.oracle {
        let o = lib(oracle::submodularity_by_definition(f, c.tol))?;
        let agree = o.holds == verdicts[0].holds;
        rep.line(format!(
            "  oracle (all pairs S, T): submodular {}, {}",
            if o.holds { "yes" } else { "no" },
            if agree { "agrees" } else { "DISAGREES" }
        ));
        rep.put(
            "oracle_submodular",
            json!({ "holds": o.holds, "worst": o.worst, "agrees": agree }),
        );
        if !agree {
            rep.violation("oracle disagrees with the local submodularity scan".into());
        }
    }
    Ok(())
}

fn sequence_lines(rep: &mut Report, s: &SequenceReport) {
    let case = s
        .case
        .map_or("-".to_string(), |c| format!("{c:?}").to_lowercase());
    let claimed = s
        .direction_claimed
        .map_or("none".to_string(), |d| format!("{d:?}").to_lowercase());
    rep.line(format!(
        "  {:<18} case {case}  claimed {claimed:<10}  measured {:<10}  {}",
        s.name,
        format!("{:?}", s.measured).to_lowercase(),
        if s.holds { "ok" } else { "VIOLATED" }
    ));
    rep.line(format!("    {}", fmt_values(&s.values)));
    if !s.holds {
        let w = s.worst_step.expect("a failing claim has a worst step");
        rep.violation(format!(
            "sequence {} breaks its claimed direction between k={} and k={} (slack {:e})",
            s.name,
            w.k,
            w.k + 1,
            w.slack
        ));
    }
}

fn tk_section(rep: &mut Report, f: &SetFunction, c: &Common) -> Result<(), String> {
    let g = transform(c)?;
    let s = lib(inequality_lab::tk_sequence(f, &g, Claim::Detect, c.tol))?;
    rep.heading("averaged subset sequence t_1..t_n");
    sequence_lines(rep, &s);
    rep.put("sequence", &s);
    Ok(())
}

fn info_sequences_section(rep: &mut Report, p: &JointPmf, c: &Common) -> Result<(), String> {
    let r = c.r.unwrap_or(1.0);
    rep.heading(&format!("information sequences (r = {r})"));
    let mut done = Vec::new();
    let mut skipped = Vec::new();
    for which in InfoSequence::ALL {
        match inequality_lab::corollary3_sequences(p, r, which, c.tol) {
            Ok(s) => {
                sequence_lines(rep, &s);
                done.push(s);
            }
            Err(Error::Precondition(msg)) if which.needs_sums() => {
                rep.line(format!("  {:<18} skipped: {msg}", which.name()));
                skipped.push(json!({ "name": which.name(), "reason": msg }));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    rep.put("r", r);
    rep.put("sequences", done);
    rep.put("skipped_sequences", skipped);
    Ok(())
}

/// Sum-entropy checks; runs only for independent integer-valued PMFs.
fn epi_section(rep: &mut Report, p: &JointPmf, c: &Common) -> Result<(), String> {
    let n = p.var_count();
    if n < 2 || p.integer_values().is_none() {
        return Ok(());
    }
    if p.total_correlation() > inequality_lab::INDEPENDENCE_THRESHOLD {
        rep.line("  (sum entropy-power checks skipped: variables are dependent)");
        return Ok(());
    }
    let marginals = p.single_marginals();
    let ks: Vec<usize> = match c.k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    rep.heading("entropy of sums");
    let mut out = Vec::new();
    for k in ks {
        let r = lib(inequality_lab::sum_epi_checks(&marginals, k, None, c.tol))?;
        rep.line(format!("  k = {k}"));
        rep.checks(&r.checks);
        out.push(r);
    }
    rep.put("sum_entropy", out);
    Ok(())
}

pub fn sequences(c: &Common) -> Out {
    check_tol(c)?;
    let mut rep = Report::new("sequences");
    match load(c)? {
        Input::SetFn(file) => tk_section(&mut rep, &file.f, c)?,
        Input::Pmf(p) => {
            info_sequences_section(&mut rep, &p, c)?;
            epi_section(&mut rep, &p, c)?;
        }
        _ => return Err("sequences needs a set function or a PMF".into()),
    }
    Ok(rep)
}

pub fn shearer(c: &Common) -> Out {
    check_tol(c)?;
    let file = load_setfn(c)?;
    let mut rep = Report::new("shearer");
    shearer_section(&mut rep, &file.f, file.family.as_ref(), c, true)?;
    Ok(rep)
}

fn random_cover(f: &SetFunction, c: &Common, seed: u64) -> Result<FamilySpec, String> {
    let n = f.n();
    let d = c.d.unwrap_or(1);
    if d == 0 {
        return Err("--d must be at least 1".into());
    }
    let m = n.max(d).max(2);
    let mut rng = OracleRng::seed_from_u64(seed);
    Ok(FamilySpec {
        family: oracle::random_cover(&mut rng, n, m, d),
        d,
        target: f.full(),
    })
}

fn shearer_section(
    rep: &mut Report,
    f: &SetFunction,
    given: Option<&FamilySpec>,
    c: &Common,
    required: bool,
) -> Result<(), String> {
    let spec = match (given, c.seed) {
        (Some(s), _) => {
            let mut s = s.clone();
            if let Some(d) = c.d {
                s.d = d;
            }
            s
        }
        (None, Some(seed)) => random_cover(f, c, seed)?,
        (None, None) if required => {
            return Err(
                "the input has no family section; pass --seed to draw a random cover".into(),
            )
        }
        (None, None) => return Ok(()),
    };
    let ground = f.ground();
    rep.heading(&format!(
        "generalized Shearer: d = {}, target = {}",
        spec.d,
        ground.render(spec.target)
    ));
    let members: Vec<String> = spec
        .family
        .members()
        .iter()
        .map(|&m| ground.render(m))
        .collect();
    rep.line(format!("  family: {}", members.join(" ")));
    let r = lib(setfn::shearer_check(
        f,
        &spec.family,
        spec.d,
        spec.target,
        c.tol,
    ))?;
    if r.hypothesis_holds {
        rep.check(&r.check);
    } else {
        rep.line(format!(
            "  hypothesis of part {:?} fails for this f; sum {} vs {} reported only",
            r.part, r.check.lhs, r.check.rhs
        ));
    }
    rep.put(
        "shearer",
        json!({ "family": spec.family.members(), "report": &r }),
    );
    uncrossing_section(rep, f, &spec.family, c)
}

fn uncrossing_section(
    rep: &mut Report,
    f: &SetFunction,
    family: &SubsetFamily,
    c: &Common,
) -> Result<(), String> {
    let u = lib(setfn::uncross_to_chain(family))?;
    let ground = f.ground();
    let chain: Vec<String> = u
        .chain
        .members()
        .iter()
        .map(|&m| ground.render(m))
        .collect();
    rep.line(format!(
        "  chain after {} uncrossing step(s): {}",
        u.steps.len(),
        chain.join(" ")
    ));
    let same_profile = u.chain.degree_profile() == family.degree_profile();
    if !same_profile {
        rep.violation("uncrossing changed the degree profile".into());
    }
    let (before, after) = (family.sum_of(f), u.chain.sum_of(f));
    let submodular = f.is_submodular(c.tol).holds;
    if submodular {
        rep.check(&Check::le(
            "uncrossing does not increase the sum",
            after,
            before,
            c.tol,
        ));
    }
    rep.put(
        "uncrossing",
        json!({
            "chain": u.chain.members(),
            "steps": u.steps,
            "degree_profile": u.chain.degree_profile(),
            "profile_preserved": same_profile,
            "family_sum": before,
            "chain_sum": after,
            "sum_asserted": submodular,
        }),
    );
    Ok(())
}

pub fn han(c: &Common) -> Out {
    check_tol(c)?;
    let mut rep = Report::new("han");
    match load(c)? {
        Input::Pmf(p) => {
            han_section(&mut rep, &p, c);
            let f = lib(infomeasures::build_entropic_fn(&p))?;
            gen_han_section(&mut rep, &f, c)?;
        }
        Input::SetFn(file) => gen_han_section(&mut rep, &file.f, c)?,
        _ => return Err("han needs a PMF or a set function".into()),
    }
    Ok(rep)
}

fn han_section(rep: &mut Report, p: &JointPmf, c: &Common) {
    rep.heading("Han's inequality");
    let check = inequality_lab::han_check(p, c.tol);
    rep.check(&check);
    rep.put("han", &check);
}

fn gen_han_section(rep: &mut Report, f: &SetFunction, c: &Common) -> Result<(), String> {
    let n = f.n();
    let alpha = c.alpha.unwrap_or(1.0);
    let ks: Vec<usize> = match c.k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    rep.heading(&format!("generalized Han (alpha = {alpha})"));
    let mut out = Vec::new();
    for k in ks {
        let r = lib(inequality_lab::corollary2_check(f, alpha, k, c.tol))?;
        rep.line(format!("  k = {k}, c_alpha = {}", r.c_alpha));
        rep.check(&r.check);
        if let Some(bounds) = &r.rank_bounds {
            rep.checks(bounds);
        }
        out.push(r);
    }
    rep.put("generalized_han", out);
    Ok(())
}

fn sandwich_section(rep: &mut Report, f: &SetFunction, c: &Common) -> Result<(), String> {
    let g = transform(c)?;
    if g.direction() != inequality_lab::Direction::Increasing || !g.is_convex() {
        return Ok(());
    }
    rep.heading(&format!("finite-n sandwich (g = {g})"));
    let mut out = Vec::new();
    for k in 1..=f.n() {
        let r = lib(inequality_lab::corollary1_sandwich(f, &g, k, c.tol))?;
        rep.line(format!("  k = {k}"));
        rep.checks(&r.checks);
        out.push(r);
    }
    rep.put("sandwich", out);
    Ok(())
}

pub fn projections(c: &Common) -> Out {
    check_tol(c)?;
    let points = match load(c)? {
        Input::Points(p) => p,
        _ => return Err("projections needs a point-set file (integers per line)".into()),
    };
    let mut rep = Report::new("projections");
    let n = points[0].len();
    let ks: Vec<usize> = match c.k {
        Some(k) => vec![k],
        None if n >= 2 => vec![n - 1],
        None => return Err("points need at least two coordinates".into()),
    };
    projection_section(&mut rep, &points, &ks, c)?;
    Ok(rep)
}

fn projection_section(
    rep: &mut Report,
    points: &[Vec<i64>],
    ks: &[usize],
    c: &Common,
) -> Result<(), String> {
    let mut out = Vec::new();
    for &k in ks {
        let r = lib(inequality_lab::projection_bound(points, k, c.tol))?;
        rep.heading(&format!(
            "projection bound: n = {}, k = {k}, |P| = {}",
            r.n, r.cardinality
        ));
        rep.line(format!("  projection sizes: {:?}", r.projection_sizes));
        rep.line(format!(
            "  rate {:.10}, mean projection rate {:.10}",
            r.rate, r.mean_projection_rate
        ));
        rep.check(&Check::le(
            "points <= projection bound",
            r.cardinality as f64,
            r.bound,
            c.tol,
        ));
        if c.oracle {
            let (_, canon) = lib(inequality_lab::canonical_points(points))?;
            let brute = lib(oracle::brute_projection(&canon, k))?;
            if brute != r.projection_sizes {
                rep.violation(format!("oracle projection sizes {brute:?} differ"));
            }
        }
        out.push(r);
    }
    rep.put("projections", out);
    Ok(())
}

pub fn hypercube(c: &Common) -> Out {
    check_tol(c)?;
    let a = load_codes(c)?;
    let tau = c.tau.unwrap_or(1);
    let mut rep = Report::new("hypercube");
    hypercube_section(&mut rep, &a, tau, c)?;
    Ok(rep)
}

fn hypercube_section(rep: &mut Report, a: &CodeSet, tau: usize, c: &Common) -> Result<(), String> {
    let stats = lib(hypercube::edge_counts(a, tau))?;
    rep.put("n", a.n());
    rep.put("card_A", a.len());
    rep.put("tau", tau);
    rep.heading(&format!(
        "confusion graph: n = {}, |A| = {}, tau = {tau}",
        a.n(),
        a.len()
    ));
    let mut rows = Vec::new();
    let mut extra = Vec::new();
    for d in 1..=tau {
        let b = lib(hypercube::bound_report_from(a, &stats, d, None, c.tol))?;
        let inf = hypercube::influence_bounds_from(a, &stats, &b, c.tol);
        rep.line(format!(
            "  d = {d}: E_d = {}, B_d = {}, m_d = {}{}, l_d = {}{}, useful = {}",
            b.exact_count,
            stats.boundary_counts[d - 1],
            b.m_d,
            if b.m_vacuous { " (vacuous)" } else { "" },
            b.l_d,
            if b.l_vacuous { " (vacuous)" } else { "" },
            b.useful
        ));
        rep.check(&b.han_step);
        rep.checks(&b.checks);
        rep.checks(&inf.checks);
        rows.push(json!({
            "d": d,
            "E_d": b.exact_count,
            "B_d": stats.boundary_counts[d - 1],
            "m_d": b.m_d,
            "l_d": b.l_d,
            "m_vacuous": b.m_vacuous,
            "l_vacuous": b.l_vacuous,
            "refined": b.refined,
            "default": b.default_bound,
            "trivial": b.trivial,
            "useful": b.useful,
            "influence": inf.exact,
            "refined_lb": inf.refined_lb,
            "default_lb": inf.default_lb,
        }));
        extra.push(json!({ "d": d, "counting_step": &b.han_step, "checks": &b.checks, "influence_checks": &inf.checks }));
    }
    let totals = lib(hypercube::total_edge_bound_from(a, &stats, c.tol))?;
    rep.line(format!("  total edges {}", totals.total_edges));
    rep.checks(&totals.checks);
    let ident = hypercube::d1_entropy_identity(a, c.tol);
    let ident_check = Check::le(
        "d=1 entropy identity (|lhs - rhs|)",
        (ident.lhs - ident.rhs).abs(),
        0.0,
        c.tol,
    );
    rep.check(&ident_check);
    rep.put("per_d", rows);
    rep.put("checks", extra);
    rep.put(
        "totals",
        json!({
            "edges": totals.total_edges,
            "sum_form": totals.sum_form,
            "entropy_form": totals.entropy_form,
            "checks": &totals.checks,
        }),
    );
    rep.put("d1_identity", ident);
    if c.oracle {
        let brute = lib(oracle::brute_pairs(a, tau))?;
        let mut agree = brute == stats;
        for d in 1..=tau {
            let (m, l) = lib(oracle::brute_md_ld(a, d))?;
            let fast = lib(hypercube::compute_constants(a, d))?;
            agree &= m.map_or(fast.m.vacuous, |v| !fast.m.vacuous && v == fast.m.value);
            agree &= l.map_or(fast.l.vacuous, |v| !fast.l.vacuous && v == fast.l.value);
        }
        rep.line(format!(
            "  oracle cross-check: {}",
            if agree { "agrees" } else { "DISAGREES" }
        ));
        rep.put("oracle_agrees", agree);
        if !agree {
            rep.violation("oracle counts differ from the optimized scan".into());
        }
    }
    Ok(())
}

pub fn influence(c: &Common) -> Out {
    check_tol(c)?;
    let a = load_codes(c)?;
    let d = c.d.unwrap_or(1);
    let mut rep = Report::new("influence");
    let b = lib(hypercube::influence_bounds(&a, d, None, c.tol))?;
    rep.heading(&format!(
        "influence of {d}-subsets: n = {}, |A| = {}",
        a.n(),
        a.len()
    ));
    rep.line(format!("  exact {:.12}", b.exact));
    rep.checks(&b.checks);
    rep.put("n", a.n());
    rep.put("card_A", a.len());
    rep.put("influence", &b);
    Ok(rep)
}

pub fn report(c: &Common) -> Out {
    check_tol(c)?;
    let mut rep = Report::new("report");
    match load(c)? {
        Input::SetFn(file) => {
            rep.put("input_kind", "setfn");
            let f = &file.f;
            predicates_section(&mut rep, f, c)?;
            if f.require_zero_at_empty(c.tol).is_ok() {
                tk_section(&mut rep, f, c)?;
                let alpha = c.alpha.unwrap_or(1.0);
                if f.n() >= 2
                    && f.is_submodular(c.tol).holds
                    && (alpha == 1.0 || f.is_nonnegative(c.tol).holds)
                {
                    gen_han_section(&mut rep, f, c)?;
                }
                if f.is_rank_function(c.tol).holds {
                    sandwich_section(&mut rep, f, c)?;
                }
            }
            shearer_section(&mut rep, f, file.family.as_ref(), c, false)?;
        }
        Input::Pmf(p) => {
            rep.put("input_kind", "pmf");
            builders_section(&mut rep, &p, c)?;
            han_section(&mut rep, &p, c);
            if p.var_count() >= 2 {
                let f = lib(infomeasures::build_entropic_fn(&p))?;
                gen_han_section(&mut rep, &f, c)?;
            }
            info_sequences_section(&mut rep, &p, c)?;
            epi_section(&mut rep, &p, c)?;
        }
        Input::Points(points) => {
            rep.put("input_kind", "points");
            let n = points[0].len();
            if n < 2 {
                return Err("points need at least two coordinates".into());
            }
            let ks: Vec<usize> = match c.k {
                Some(k) => vec![k],
                None => (1..n).collect(),
            };
            projection_section(&mut rep, &points, &ks, c)?;
        }
        Input::Codes(file) => {
            for w in &file.warnings {
                eprintln!("warning: {w}");
            }
            rep.put("input_kind", "codeset");
            let tau = c.tau.unwrap_or(file.set.n().min(3));
            hypercube_section(&mut rep, &file.set, tau, c)?;
        }
    }
    Ok(rep)
}

/// Structure of the entropic, conditional-entropy and mutual-information
/// functions of a PMF.
fn builders_section(rep: &mut Report, p: &JointPmf, c: &Common) -> Result<(), String> {
    rep.heading("set functions of the PMF");
    let built = [
        ("entropy", lib(infomeasures::build_entropic_fn(p))?),
        (
            "conditional_entropy",
            lib(infomeasures::build_cond_entropy_fn(p))?,
        ),
        ("mutual_information", lib(infomeasures::build_mi_fn(p))?),
    ];
    let mut out = serde_json::Map::new();
    for (name, f) in &built {
        let flags = json!({
            "rank_function": f.is_rank_function(c.tol).holds,
            "submodular": f.is_submodular(c.tol).holds,
            "supermodular": f.is_supermodular(c.tol).holds,
            "monotone_increasing": f.is_monotone_increasing(c.tol).holds,
        });
        rep.line(format!("  {name:<22} {flags}"));
        out.insert(name.to_string(), flags);
    }
    rep.put("builders", Value::Object(out));
    Ok(())
}
