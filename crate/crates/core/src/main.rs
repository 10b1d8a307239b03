use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use iyb::construct::{
    class2_equivariant_sandling, class2_odd, combine_semidirect, hertweck_d_structure, power_wreath, ConstructError,
};
use iyb::group::{read_action_file, write_table, Automorphism, Group, GroupAction, GroupError};
use iyb::search::{
    brute_force_ideals, heuristic_lift, iyb_search, CentralPolicy, HyperplaneSampling, SearchConfig, SearchError,
    SearchHint,
};
use iyb::structure::{Certificate, CertificateError, Equivariance, IybStructure, Provenance, VerificationSummary};

#[derive(Parser)]
#[command(name = "iyb", version, about = "Construct, search for and verify IYB structures on finite groups")]
struct Cli {
    /// Worker threads for search and verification.
    #[arg(long, global = true, env = "IYB_JOBS")]
    jobs: Option<usize>,
    /// Suppress the JSON result on standard output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural invariants of a group.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Build a structure with one of the constructors.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Check a certificate file.
    Verify {
        path: PathBuf,
        /// Check the cocycle law on every pair regardless of group size.
        #[arg(long)]
        full: bool,
    },
    /// Search for structures.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Run the bundled self checks.
    Selftest {
        #[arg(long)]
        quick: bool,
    },
    /// Write the Cayley table of a group.
    Export {
        #[arg(long)]
        group: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct Out {
    /// Certificate output path.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The equivariant structure on the Heisenberg group D(q).
    HertweckD {
        #[arg(long)]
        q: u64,
        /// Primitive root mod q used for α1, α2.
        #[arg(long)]
        zeta: Option<u64>,
        #[arg(long)]
        allow_any_odd_q: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Odd class-2 group with the twisted addition.
    Class2Odd {
        #[arg(long)]
        group: String,
        /// Automorphisms to record as equivariance, one per line.
        #[arg(long)]
        automorphisms: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Equivariant complement in the augmentation ideal of a class-2 p-group.
    Sandling {
        #[arg(long)]
        group: String,
        /// Automorphisms generating the acting group, one per line.
        #[arg(long)]
        action: Option<PathBuf>,
        /// Acting group; generated by the automorphisms when absent.
        #[arg(long)]
        complement: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        /// Also write the ideal certificate here.
        #[arg(long)]
        ideal_output: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Structure on N ⋊ H from an equivariant one on N and any on H.
    Semidirect {
        #[arg(long)]
        normal: String,
        #[arg(long)]
        complement: String,
        #[arg(long)]
        action: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Direct power of an equivariant structure, equivariant under the wreath product.
    Power {
        /// Certificate carrying equivariance data.
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampling {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Central {
    Uniform,
    First,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Randomized ideal lifting along a central series.
    Heuristic {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long)]
        k: Option<u32>,
        /// Report the lowest successful restart.
        #[arg(long)]
        deterministic: bool,
        #[arg(long, value_enum, default_value_t = Sampling::Random)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value_t = Central::Uniform)]
        central: Central,
        /// Write the restart trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Every complementing left ideal, by enumeration.
    Brute {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pick a strategy from the group's shape.
    Auto {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Verification(String),
    Construction(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Construction(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Construction(m) | Failure::Input(m) => m,
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        Failure::Construction(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        Failure::Construction(e.to_string())
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn cert_failure(e: CertificateError) -> Failure {
    match e {
        CertificateError::Malformed(m) => Failure::Input(format!("malformed certificate: {m}")),
        CertificateError::Failed(v) => Failure::Verification(v.to_string()),
    }
}

type Outcome = Result<Value, Failure>;

fn load_group(spec: &str) -> Result<Arc<Group>, Failure> {
    Group::from_spec(spec).map(Arc::new).map_err(input)
}

fn load_automorphisms(group: &Group, path: &Path) -> Result<Vec<Automorphism>, Failure> {
    read_action_file(path)?
        .into_iter()
        .map(|m| Automorphism::new(group, m))
        .collect::<Result<_, GroupError>>()
        .map_err(input)
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn summary_json(s: &VerificationSummary) -> Value {
    json!({
        "order": s.order,
        "cocycle_modes": s.cocycle_modes,
        "pairs_checked": s.pairs_checked,
        "equivariance_generators": s.equivariance_generators,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// Re-verifies `cert` from its serialized text and writes it.
fn emit(cert: &Certificate, out: &Out) -> Outcome {
    let text = cert.to_canonical_string();
    let reread = Certificate::parse(&text).map_err(cert_failure)?;
    let check = reread.verify(false).map_err(|e| Failure::Construction(e.to_string()))?;
    if let Some(path) = &out.output {
        write_text(path, &text)?;
        eprintln!("wrote {}", path.display());
    }
    eprintln!(
        "verified: |G| = {}, cocycle {}, {} equivariance generator(s)",
        check.summary.order,
        check.summary.cocycle_modes.join("+"),
        check.summary.equivariance_generators
    );
    Ok(json!({
        "kind": reread.kind,
        "output": out.output.as_ref().map(|p| p.display().to_string()),
        "verification": summary_json(&check.summary),
    }))
}

fn info(spec: &str) -> Outcome {
    let g = load_group(spec)?;
    let inv = g.structural_invariants();
    let histogram: serde_json::Map<String, Value> =
        inv.element_orders.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    eprintln!("group {spec}");
    eprintln!("  order            {}", inv.order);
    eprintln!("  |Z(G)|           {}", inv.center.order());
    eprintln!("  |[G,G]|          {}", inv.derived.order());
    match inv.nilpotency_class {
        Some(c) => eprintln!("  class            {c}"),
        None => eprintln!("  class            not nilpotent"),
    }
    eprintln!("  element orders   {:?}", inv.element_orders);
    Ok(json!({
        "order": inv.order,
        "center_order": inv.center.order(),
        "derived_order": inv.derived.order(),
        "nilpotency_class": inv.nilpotency_class,
        "abelian": g.is_abelian(),
        "p": g.prime_of_p_group(),
        "element_orders": histogram,
    }))
}

fn construct(cmd: ConstructCmd) -> Outcome {
    match cmd {
        ConstructCmd::HertweckD { q, zeta, allow_any_odd_q, out } => {
            let t = Instant::now();
            let h = hertweck_d_structure(q, zeta, allow_any_odd_q)?;
            eprintln!("built D({q}) of order {} in {:.2?}", h.structure.group().order(), t.elapsed());
            let params = json!({ "q": q, "zeta": h.a.params.zeta, "allow_any_odd_q": allow_any_odd_q });
            emit(&Certificate::from_structure(&h.structure, Provenance::new("hertweck-d", params, None)), &out)
        }
        ConstructCmd::Class2Odd { group, automorphisms, out } => {
            let g = load_group(&group)?;
            let autos = match &automorphisms {
                Some(p) => load_automorphisms(&g, p)?.iter().map(|a| a.map().to_vec()).collect(),
                None => Vec::new(),
            };
            let s = class2_odd(g, &autos)?;
            let params = json!({ "group": group, "automorphisms": autos.len() });
            emit(&Certificate::from_structure(&s, Provenance::new("class2-odd", params, None)), &out)
        }
        ConstructCmd::Sandling { group, action, complement, k, ideal_output, out } => {
            let n = load_group(&group)?;
            let act = match (&action, &complement) {
                (None, None) => GroupAction::trivial(Arc::new(Group::cyclic(1)?), n.clone()),
                (None, Some(_)) => return Err(Failure::Input("--complement needs --action".into())),
                (Some(path), None) => GroupAction::generated_by(n.clone(), load_automorphisms(&n, path)?)?,
                (Some(path), Some(h)) => GroupAction::new(load_group(h)?, n.clone(), load_automorphisms(&n, path)?)?,
            };
            let t = Instant::now();
            let res = class2_equivariant_sandling(&act, k)?;
            eprintln!(
                "H of order {}: [ω : I] = {}, {} pairwise tests, {:.2?}",
                act.actor().order(),
                res.index,
                res.pairwise_tests,
                t.elapsed()
            );
            let params = json!({ "group": group, "acting_order": act.actor().order(), "k": k });
            if let Some(path) = ideal_output {
                let ideal = Certificate::from_ideal(
                    &res.ring,
                    &res.ideal,
                    Some(&res.automorphisms),
                    Provenance::new("sandling", params.clone(), None),
                );
                write_text(&path, &ideal.to_canonical_string())?;
                eprintln!("wrote {}", path.display());
            }
            let mut v = emit(&Certificate::from_structure(&res.structure, Provenance::new("sandling", params, None)), &out)?;
            v["index"] = json!(res.index.to_string());
            v["pairwise_tests"] = json!(res.pairwise_tests);
            Ok(v)
        }
        ConstructCmd::Semidirect { normal, complement, action, out } => {
            let n = load_group(&normal)?;
            let h = load_group(&complement)?;
            let act = GroupAction::new(h.clone(), n.clone(), load_automorphisms(&n, &action)?)?;
            let s_n = class2_equivariant_sandling(&act, None)?.structure;
            let s_h = iyb_search(h.clone(), &SearchHint::from_group(&h), &SearchConfig::default())?.structure;
            let s = combine_semidirect(&s_h, &s_n, &act)?;
            let params = json!({ "normal": normal, "complement": complement });
            emit(&Certificate::from_structure(&s, Provenance::new("semidirect", params, None)), &out)
        }
        ConstructCmd::Power { from, n, out } => {
            let text = fs::read_to_string(&from).map_err(|e| Failure::Input(format!("{}: {e}", from.display())))?;
            let base = Certificate::parse(&text).map_err(cert_failure)?;
            let s: IybStructure = base.verify(false).map_err(cert_failure)?.structure;
            let Some(Equivariance { automorphisms, .. }) = s.equivariance() else {
                return Err(Failure::Construction("the certificate carries no equivariance data".into()));
            };
            let g = s.group().clone();
            let autos =
                automorphisms.iter().map(|p| Automorphism::new(&g, p.clone())).collect::<Result<Vec<_>, _>>()?;
            let act = GroupAction::generated_by(g, autos)?;
            let (_, wact) = act.direct_power_with_wreath(n).map_err(|e| Failure::Construction(e.to_string()))?;
            let w = wact.actor().clone();
            let gens = w.generators().to_vec();
            let (p, _) = power_wreath(&s, &act, n, &w, &gens)?;
            let params = json!({ "from": from.display().to_string(), "n": n });
            emit(&Certificate::from_structure(&p, Provenance::new("power", params, None)), &out)
        }
    }
}

fn verify(path: &Path, full: bool) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let cert = Certificate::parse(&text).map_err(cert_failure)?;
    let t = Instant::now();
    let check = cert.verify(full).map_err(cert_failure)?;
    let canonical = cert.to_canonical_string() == text;
    eprintln!(
        "verified {} in {:.2?}: |G| = {}, cocycle {}",
        path.display(),
        t.elapsed(),
        check.summary.order,
        check.summary.cocycle_modes.join("+")
    );
    if let Some(tr) = &check.transversal {
        eprintln!("  [ω : I] = {}, {} pairwise tests", tr.index, tr.pairwise_tests);
    }
    Ok(json!({
        "verified": true,
        "kind": cert.kind,
        "canonical": canonical,
        "verification": summary_json(&check.summary),
        "index": check.transversal.as_ref().map(|t| t.index.to_string()),
    }))
}

fn search(cmd: SearchCmd) -> Outcome {
    match cmd {
        SearchCmd::Heuristic { group, seed, restarts, k, deterministic, sampling, central, trace, out } => {
            let g = load_group(&group)?;
            let cfg = SearchConfig {
                seed,
                max_restarts: restarts,
                sampling: match sampling {
                    Sampling::Random => HyperplaneSampling::Random,
                    Sampling::Exhaustive => HyperplaneSampling::Exhaustive,
                },
                central: match central {
                    Central::Uniform => CentralPolicy::Uniform,
                    Central::First => CentralPolicy::First,
                },
                k,
                deterministic,
            };
            let t = Instant::now();
            let res = heuristic_lift(g, &cfg);
            let dump = |tr: &iyb::search::SearchTrace| -> Result<(), Failure> {
                if let Some(p) = &trace {
                    write_text(p, &format!("{}\n", serde_json::to_string_pretty(tr).map_err(input)?))?;
                }
                Ok(())
            };
            match res {
                Ok(found) => {
                    dump(&found.trace)?;
                    eprintln!("restart {} succeeded at k = {} after {:.2?}", found.restart, found.k, t.elapsed());
                    let mut v = emit(&found.certificate, &out)?;
                    v["restart"] = json!(found.restart);
                    v["k"] = json!(found.k);
                    Ok(v)
                }
                Err(SearchError::Inconclusive { restarts, trace: tr }) => {
                    dump(&tr)?;
                    Err(Failure::Construction(format!("inconclusive after {restarts} restarts")))
                }
                Err(e) => Err(e.into()),
            }
        }
        SearchCmd::Brute { group, k, output } => {
            let g = load_group(&group)?;
            let ideals = brute_force_ideals(g.clone(), k)?;
            let p = g.prime_of_p_group().unwrap_or(1);
            let list = json!({
                "group": group,
                "k": k,
                "modulus": p.pow(k),
                "count": ideals.len(),
                "ideals": ideals.iter().map(|i| i.rows().to_vec()).collect::<Vec<_>>(),
            });
            if let Some(path) = &output {
                write_text(path, &format!("{list}\n"))?;
            }
            eprintln!("{} complementing ideals", ideals.len());
            Ok(json!({ "count": ideals.len(), "output": output.map(|p| p.display().to_string()) }))
        }
        SearchCmd::Auto { group, seed, restarts, out } => {
            let g = load_group(&group)?;
            let hint = SearchHint::from_group(&g);
            let cfg = SearchConfig { seed, max_restarts: restarts, ..SearchConfig::default() };
            let res = iyb_search(g, &hint, &cfg)?;
            eprintln!("strategy {:?}", res.strategy);
            let mut v = emit(&res.certificate, &out)?;
            v["strategy"] = json!(res.strategy);
            Ok(v)
        }
    }
}

fn selftest(quick: bool) -> Outcome {
    let (results, elapsed) = iyb::selftest::run(quick, |r| {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        eprintln!("{mark} [{}] {} ({} ms): {}", r.module, r.name, r.millis, r.detail);
    });
    eprintln!("total {:.2?}", elapsed);
    let failed: Vec<String> =
        results.iter().filter(|r| !r.passed).map(|r| format!("{} ({})", r.name, r.module)).collect();
    if failed.is_empty() {
        Ok(json!({ "checks": results, "millis": elapsed.as_millis() }))
    } else {
        Err(Failure::Verification(format!("failed: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Info { group } => info(&group),
        Command::Construct(c) => construct(c),
        Command::Verify { path, full } => verify(&path, full),
        Command::Search(c) => search(c),
        Command::Selftest { quick } => selftest(quick),
        Command::Export { group, output } => {
            let g = load_group(&group)?;
            write_text(&output, &write_table(&g)?)?;
            Ok(json!({ "order": g.order(), "output": output.display().to_string() }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let quiet = cli.quiet;
    match run(cli) {
        Ok(v) => {
            if !quiet {
                println!("{}", json!({ "status": "ok", "result": v }));
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            if !quiet {
                println!("{}", json!({ "status": "error", "exit_code": f.code(), "message": f.message() }));
            }
            ExitCode::from(f.code())
        }
    }
}
