//! orbikit: exact computations with finite groupoids, gerbes, twisted
//! sectors and twisted orbifold K-theory / orbifold cohomology.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use orbikit::cohomology::cocycle_representatives;
use orbikit::gerbe::{characteristic_class_capped, is_trivial};
use orbikit::groupoid::{morita_equivalent, morita_normal_form, validate_groupoid};
use orbikit::homology::cohomology_mod;
use orbikit::inertia::{inertia_groupoid, sector_decomposition, sectors_match_inertia};
use orbikit::nerve::{nerve, DEFAULT_NERVE_CAP};
use orbikit::report::Report;
use orbikit::schema::{
    parse_input, resolve, resolve_groupoid, CliError, CliResult, CommandBlock, GroupoidRef,
    Resolved,
};
use orbikit::twisted::{orbifold_cohomology, twisted_k_rank, DegreeShiftData};

#[derive(Parser)]
#[command(name = "orbikit", version, about = "exact orbifold groupoid computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate every declaration in the document.
    Validate(Common),
    /// Schur multiplier H²(G, U(1)) of the command's group.
    Schur(Common),
    /// One normalized 2-cocycle representative per class of H²(G, U(1)).
    Cocycles(Common),
    /// Characteristic class of the command's gerbe, with trivialization
    /// cross-check.
    GerbeClass(Common),
    /// Decide Morita equivalence of the command's left and right groupoids.
    Morita(Common),
    /// Inertia groupoid of the command's target groupoid.
    Inertia(Common),
    /// Twisted-sector decomposition of the command's action.
    Sectors(Common),
    /// Rank of alpha-twisted equivariant K-theory of the point.
    TwistedK(Common),
    /// Twisted orbifold cohomology of the command's complex.
    OrbifoldCohomology(Common),
    /// Cohomology of the nerve of the command's target groupoid.
    NerveCohomology(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    /// Input document (JSON).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cap on the number of nerve simplices per degree.
    #[arg(long = "cap-nerve")]
    cap_nerve: Option<usize>,
    /// Coefficient modulus for nerve-cohomology (0 = integral).
    #[arg(long)]
    modulus: Option<u64>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Schur(_) => "schur",
            Command::Cocycles(_) => "cocycles",
            Command::GerbeClass(_) => "gerbe-class",
            Command::Morita(_) => "morita",
            Command::Inertia(_) => "inertia",
            Command::Sectors(_) => "sectors",
            Command::TwistedK(_) => "twisted-k",
            Command::OrbifoldCohomology(_) => "orbifold-cohomology",
            Command::NerveCohomology(_) => "nerve-cohomology",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Schur(c)
            | Command::Cocycles(c)
            | Command::GerbeClass(c)
            | Command::Morita(c)
            | Command::Inertia(c)
            | Command::Sectors(c)
            | Command::TwistedK(c)
            | Command::OrbifoldCohomology(c)
            | Command::NerveCohomology(c) => c,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = std::panic::catch_unwind(|| run(&cli.command));
    let code = match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("orbikit: error: {}", e.message);
            e.code
        }
        Err(_) => {
            eprintln!("orbikit: internal error (unexpected panic)");
            6
        }
    };
    eprintln!("orbikit: elapsed {} ms", started.elapsed().as_millis());
    std::process::exit(code);
}

fn run(command: &Command) -> CliResult<()> {
    let common = command.common();
    let bytes = std::fs::read(&common.input).map_err(|e| {
        CliError::syntax(format!("cannot read {}: {e}", common.input.display()))
    })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::syntax("input document is not valid UTF-8"))?;
    let doc = parse_input(text)?;
    if let Some(name) = &doc.command.name {
        if name != command.name() {
            return Err(CliError::validation(format!(
                "document command block names '{name}' but '{}' was invoked",
                command.name()
            )));
        }
    }
    let resolved = resolve(doc)?;
    let cap = effective_cap(common.cap_nerve);
    let payload = dispatch(command, &resolved, cap, common.modulus)?;
    let report = Report::new(command.name(), &bytes, payload);
    let rendered = match common.format {
        Format::Json => report.render_json(),
        Format::Table => report.render_table(),
    };
    print!("{rendered}");
    Ok(())
}

fn effective_cap(flag: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n;
    }
    if let Ok(v) = std::env::var("ORBIKIT_CAP") {
        if let Ok(n) = v.parse::<usize>() {
            return n;
        }
    }
    DEFAULT_NERVE_CAP
}

fn dispatch(command: &Command, r: &Resolved, cap: usize, modulus: Option<u64>) -> CliResult<Value> {
    match command {
        Command::Validate(_) => cmd_validate(r),
        Command::Schur(_) => cmd_schur(r),
        Command::Cocycles(_) => cmd_cocycles(r),
        Command::GerbeClass(_) => cmd_gerbe_class(r, cap),
        Command::Morita(_) => cmd_morita(r),
        Command::Inertia(_) => cmd_inertia(r),
        Command::Sectors(_) => cmd_sectors(r),
        Command::TwistedK(_) => cmd_twisted_k(r),
        Command::OrbifoldCohomology(_) => cmd_orbifold_cohomology(r),
        Command::NerveCohomology(_) => cmd_nerve_cohomology(r, cap, modulus.unwrap_or(0)),
    }
}

fn need<'a, T>(opt: &'a Option<T>, field: &str) -> CliResult<&'a T> {
    opt.as_ref()
        .ok_or_else(|| CliError::validation(format!("command block is missing field '{field}'")))
}

fn command_block(r: &Resolved) -> &CommandBlock {
    &r.command
}

fn bigint_value(b: &BigInt) -> Value {
    match i64::try_from(b) {
        Ok(n) => json!(n),
        Err(_) => json!(b.to_string()),
    }
}

fn cmd_validate(r: &Resolved) -> CliResult<Value> {
    let mut groupoid_checks = Vec::new();
    for name in r.groups.keys() {
        let g = resolve_groupoid(r, &GroupoidRef { group: Some(name.clone()), action: None })?;
        let findings = validate_groupoid(&g);
        groupoid_checks.push(json!({
            "source": name,
            "kind": "point",
            "findings": findings,
        }));
    }
    for name in r.actions.keys() {
        let g = resolve_groupoid(r, &GroupoidRef { group: None, action: Some(name.clone()) })?;
        let findings = validate_groupoid(&g);
        groupoid_checks.push(json!({
            "source": name,
            "kind": "action",
            "findings": findings,
        }));
    }
    let ok = groupoid_checks
        .iter()
        .all(|c| c["findings"].as_array().map_or(true, |f| f.is_empty()));
    Ok(json!({
        "declarations": {
            "groups": r.groups.keys().collect::<Vec<_>>(),
            "actions": r.actions.keys().collect::<Vec<_>>(),
            "complexes": r.complexes.keys().collect::<Vec<_>>(),
            "cocycles": r.cocycles.keys().collect::<Vec<_>>(),
            "gerbes": r.gerbes.keys().collect::<Vec<_>>(),
            "bundles": r.bundles.keys().collect::<Vec<_>>(),
            "shifts": r.shifts.keys().collect::<Vec<_>>(),
        },
        "groupoid_checks": groupoid_checks,
        "status": if ok { "ok" } else { "invalid" },
    }))
}

fn cmd_schur(r: &Resolved) -> CliResult<Value> {
    let name = need(&command_block(r).group, "group")?;
    let g = r
        .groups
        .get(name)
        .ok_or_else(|| CliError::reference(format!("group '{name}' is not declared")))?;
    let sm = orbikit::cohomology::schur_multiplier(g)?;
    Ok(json!({
        "group": name,
        "order": g.order(),
        "exponent": g.exponent(),
        "modulus": sm.modulus,
        "schur_multiplier": sm.group_presentation.to_string(),
        "class_count": sm.group_presentation.order().map(|o| bigint_value(&o)),
    }))
}

fn cmd_cocycles(r: &Resolved) -> CliResult<Value> {
    let name = need(&command_block(r).group, "group")?;
    let g = r
        .groups
        .get(name)
        .ok_or_else(|| CliError::reference(format!("group '{name}' is not declared")))?;
    let reps = cocycle_representatives(g)?;
    let tables: Vec<Value> = reps
        .iter()
        .map(|alpha| {
            let n = g.order();
            let rows: Vec<Value> = (0..n)
                .map(|i| {
                    Value::Array((0..n).map(|j| bigint_value(alpha.get(i, j))).collect())
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    Ok(json!({
        "group": name,
        "modulus": g.order() as u64,
        "class_count": reps.len(),
        "representatives": tables,
    }))
}

fn cmd_gerbe_class(r: &Resolved, cap: usize) -> CliResult<Value> {
    let name = need(&command_block(r).gerbe, "gerbe")?;
    let gerbe = r
        .gerbes
        .get(name)
        .ok_or_else(|| CliError::reference(format!("gerbe '{name}' is not declared")))?;
    let class = characteristic_class_capped(gerbe, cap)?;
    let witness = is_trivial(gerbe)?;
    if class.is_zero() != witness.is_some() {
        return Err(CliError::from(orbikit::Error::Integrity(
            "characteristic class and trivialization search disagree".into(),
        )));
    }
    Ok(json!({
        "gerbe": name,
        "modulus": gerbe.modulus,
        "ambient": class.ambient.to_string(),
        "coordinates": class.coordinates.iter().map(bigint_value).collect::<Vec<_>>(),
        "class_order": bigint_value(&class.order),
        "is_trivial": witness.is_some(),
    }))
}

fn cmd_morita(r: &Resolved) -> CliResult<Value> {
    let block = command_block(r);
    let left = resolve_groupoid(r, need(&block.left, "left")?)?;
    let right = resolve_groupoid(r, need(&block.right, "right")?)?;
    let cert = morita_equivalent(&left, &right)?;
    let matching: Vec<Value> = cert
        .as_ref()
        .map(|c| c.matching.iter().map(|(i, j, _)| json!([i, j])).collect())
        .unwrap_or_default();
    Ok(json!({
        "left": {"objects": left.n_objects(), "arrows": left.n_arrows()},
        "right": {"objects": right.n_objects(), "arrows": right.n_arrows()},
        "equivalent": cert.is_some(),
        "component_matching": matching,
    }))
}

fn cmd_inertia(r: &Resolved) -> CliResult<Value> {
    let block = command_block(r);
    let base = resolve_groupoid(r, need(&block.target, "target")?)?;
    let inertia = inertia_groupoid(&base)?;
    let nf = morita_normal_form(&inertia.carrier)?;
    let mut orders: Vec<usize> =
        nf.components.iter().map(|c| c.automorphism_group.order()).collect();
    orders.sort_unstable();
    Ok(json!({
        "base": {"objects": base.n_objects(), "arrows": base.n_arrows()},
        "objects": inertia.carrier.n_objects(),
        "arrows": inertia.carrier.n_arrows(),
        "components": nf.components.len(),
        "automorphism_group_orders": orders,
    }))
}

fn cmd_sectors(r: &Resolved) -> CliResult<Value> {
    let name = need(&command_block(r).action, "action")?;
    let a = r
        .actions
        .get(name)
        .ok_or_else(|| CliError::reference(format!("action '{name}' is not declared")))?;
    let dec = sector_decomposition(a)?;
    let cert = sectors_match_inertia(a)?;
    let sectors: Vec<Value> = dec
        .sectors
        .iter()
        .map(|s| {
            json!({
                "representative": a.group.names[s.representative],
                "fixed_points": s
                    .fixed_points
                    .iter()
                    .map(|&x| a.point_names[x].clone())
                    .collect::<Vec<_>>(),
                "centralizer_order": s.centralizer.len(),
                "sector_objects": s.groupoid.n_objects(),
                "sector_arrows": s.groupoid.n_arrows(),
            })
        })
        .collect();
    Ok(json!({
        "action": name,
        "sectors": sectors,
        "empty_classes": dec.empty_classes,
        "matches_inertia": cert.is_some(),
    }))
}

fn cmd_twisted_k(r: &Resolved) -> CliResult<Value> {
    let name = need(&command_block(r).cocycle, "cocycle")?;
    let alpha = r
        .cocycles
        .get(name)
        .ok_or_else(|| CliError::reference(format!("cocycle '{name}' is not declared")))?;
    let classes = orbikit::cohomology::alpha_regular_classes(alpha)?;
    let reps: Vec<String> =
        classes.iter().map(|c| alpha.group.names[c.representative].clone()).collect();
    Ok(json!({
        "cocycle": name,
        "modulus": alpha.modulus,
        "rank": twisted_k_rank(alpha)?,
        "regular_class_representatives": reps,
    }))
}

fn cmd_orbifold_cohomology(r: &Resolved) -> CliResult<Value> {
    let block = command_block(r);
    let cname = need(&block.complex, "complex")?;
    let x = r
        .complexes
        .get(cname)
        .ok_or_else(|| CliError::reference(format!("complex '{cname}' is not declared")))?;
    let aname = need(&block.cocycle, "cocycle")?;
    let alpha = r
        .cocycles
        .get(aname)
        .ok_or_else(|| CliError::reference(format!("cocycle '{aname}' is not declared")))?;
    let shifts = match &block.shifts {
        Some(sname) => r
            .shifts
            .get(sname)
            .ok_or_else(|| CliError::reference(format!("shifts '{sname}' is not declared")))?
            .clone(),
        None => DegreeShiftData::default(),
    };
    let res = orbifold_cohomology(x, alpha, &shifts)?;
    let group = &x.action.group;
    let total: Vec<Value> = res
        .total
        .iter()
        .map(|(deg, dim)| json!({"degree": deg.to_string(), "dimension": dim}))
        .collect();
    let sectors: Vec<Value> = res
        .sectors
        .iter()
        .map(|s| {
            json!({
                "representative": group.names[s.representative],
                "shift": s.shift.to_string(),
                "betti": s.betti,
                "twisted_dimensions": s.twisted_dimensions,
            })
        })
        .collect();
    let empty: Vec<String> =
        res.empty_sectors.iter().map(|&g| group.names[g].clone()).collect();
    Ok(json!({
        "complex": cname,
        "cocycle": aname,
        "modulus": res.modulus,
        "total_dimension": res.total_dimension(),
        "total": total,
        "sectors": sectors,
        "empty_sectors": empty,
    }))
}

fn cmd_nerve_cohomology(r: &Resolved, cap: usize, modulus: u64) -> CliResult<Value> {
    let block = command_block(r);
    let base = resolve_groupoid(r, need(&block.target, "target")?)?;
    let max_degree = block.max_degree.unwrap_or(3);
    let nv = nerve(&base, max_degree + 1, cap)?;
    let cc = nv.chain_complex(true)?;
    let mut rows = Vec::new();
    for d in 0..=max_degree {
        let h = cohomology_mod(&cc, d, modulus)?;
        rows.push(json!({"degree": d, "group": h.to_string()}));
    }
    Ok(json!({
        "objects": base.n_objects(),
        "arrows": base.n_arrows(),
        "modulus": modulus,
        "max_degree": max_degree,
        "cohomology": rows,
    }))
}
