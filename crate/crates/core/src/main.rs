use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tridesign::families::{compute_ab, simplified_ab_ratio, solve_z, FamilyRequest};
use tridesign::io::{self, Declared, ProvenanceFile};
use tridesign::resolvability::{find_multipliers, pair_sigmas, partition_constructed};
use tridesign::{
    baranyai_parallelism, compute_counts, construct_and_verify, cyclic_orbit_resolution,
    round_robin_one_factorization, verify_resolution, CountingSummary, Error, ResolvedDesign, Result,
};

#[derive(Parser)]
#[command(name = "tridesign", version, about = "Construct and verify simple 3-designs on 2v points")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member, verify it and write it.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write a block provenance sidecar (JSON).
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Count the λ-profile of a design file; exit 0 iff simple t-design.
    Verify {
        #[arg(long, default_value_t = 3)]
        t: usize,
        file: PathBuf,
    },
    /// Check a resolution: blocks in class order plus a classes file.
    ResolveCheck {
        file: PathBuf,
        #[arg(long)]
        classes: PathBuf,
    },
    /// Partition a filler-free constructed design into σ-regular classes.
    ResolveBuild {
        #[arg(long)]
        spec_from: PathBuf,
        /// Design file; defaults to the one recorded in the sidecar.
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Parallelism of all k-subsets (k | v).
    Baranyai {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Cyclic (1,k)-resolution of all k-subsets (gcd(v,k) = 1).
    Orbits {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// One-factorization of K_v (v even).
    Onefactor {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Print Θ, Δ and Λ of a family member without assembling blocks.
    Counts {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print A, B, A/B and the admissible z₁.
    SolveAb {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    #[value(name = "thm3_1")]
    Thm31,
    #[value(name = "thm3_2")]
    Thm32,
    #[value(name = "thm3_3")]
    Thm33,
    #[value(name = "thm3_4")]
    Thm34,
    #[value(name = "gen2k")]
    Gen2k,
    #[value(name = "cor2k")]
    Cor2k,
    #[value(name = "thm_ab")]
    ThmAb,
    #[value(name = "cor_ab")]
    CorAb,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    f: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    z1: Option<usize>,
    /// λ of the imported 4-design (thm3_4).
    #[arg(long)]
    lam: Option<u64>,
    /// Imported filler design file.
    #[arg(long)]
    ingredient: Option<PathBuf>,
}

fn need<T>(x: Option<T>, flag: &str) -> Result<T> {
    x.ok_or_else(|| Error::InvalidParameters(format!("--{flag} is required for this family")))
}

impl FamilyArgs {
    fn request(&self) -> Result<FamilyRequest> {
        let ingredient = || -> Result<_> { io::load_filler(&need(self.ingredient.clone(), "ingredient")?) };
        Ok(match self.family {
            FamilyName::Thm31 => FamilyRequest::Thm31 { v: need(self.v, "v")? },
            FamilyName::Thm32 => FamilyRequest::Thm32 {
                f: need(self.f, "f")?,
                ingredient: ingredient()?,
            },
            FamilyName::Thm33 => FamilyRequest::Thm33 {
                v: need(self.v, "v")?,
                m: self.m.unwrap_or(1),
            },
            FamilyName::Thm34 => FamilyRequest::Thm34 {
                f: need(self.f, "f")?,
                lam: need(self.lam, "lam")?,
                ingredient: ingredient()?,
            },
            FamilyName::Gen2k => FamilyRequest::Gen2k {
                v: need(self.v, "v")?,
                k: need(self.k, "k")?,
                filler: ingredient()?,
            },
            FamilyName::Cor2k => FamilyRequest::Cor2k {
                v: need(self.v, "v")?,
                k: need(self.k, "k")?,
            },
            FamilyName::ThmAb => FamilyRequest::ThmAb {
                v: need(self.v, "v")?,
                k: need(self.k, "k")?,
                z1: self.z1.unwrap_or(1),
            },
            FamilyName::CorAb => FamilyRequest::CorAb {
                v: need(self.v, "v")?,
                k: need(self.k, "k")?,
                z1: self.z1.unwrap_or(1),
            },
        })
    }
}

fn print_summary(s: &CountingSummary) {
    println!("mode {}: v={} k={} on {} points", s.mode, s.v, s.k, 2 * s.v);
    for p in &s.pairs {
        let kind = if p.half { "half pair" } else { "pair" };
        println!(
            "  {kind} {}: k=({},{}) w={} annulus {} z={} Θ={} Δ={}",
            p.index, p.k_left, p.k_right, p.w, p.annulus, p.z, p.theta, p.delta
        );
    }
    println!("Θ={} Δ={} Λ={}", s.theta, s.delta, s.lambda);
    println!("blocks: {} cross + {} filler", s.cross_blocks(), 2 * s.filler_blocks);
}

fn classes_path(out: &Path, classes: &Option<PathBuf>) -> PathBuf {
    classes.clone().unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(".classes");
        PathBuf::from(s)
    })
}

fn write_resolution(r: &ResolvedDesign, out: &Path, classes: &Option<PathBuf>) -> Result<()> {
    let sigma = verify_resolution(r)?;
    let cp = classes_path(out, classes);
    io::write_resolution(out, &cp, r, sigma)?;
    println!(
        "{} blocks in {} classes, σ={}; classes in {}",
        r.block_count(),
        r.w(),
        sigma,
        cp.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct {
            family,
            out,
            provenance,
        } => {
            let build = family.request()?.build()?;
            let verified = construct_and_verify(&build.spec)?;
            let a = &verified.assembled;
            let lambda = a.summary.theta;
            if lambda != build.expected_lambda {
                return Err(Error::Verification(format!(
                    "counted λ = {lambda}, closed form gives {}",
                    build.expected_lambda
                )));
            }
            io::write_design_file(&out, &a.design, &Declared::design(3, lambda as u64))?;
            if let Some(p) = provenance {
                ProvenanceFile::new(Some(out.clone()), a.summary.clone(), &a.provenance).write(&p)?;
            }
            println!(
                "3-({},{},{}), simple, {} blocks -> {}",
                2 * build.spec.v,
                build.spec.k,
                lambda,
                a.design.len(),
                out.display()
            );
            Ok(())
        }
        Command::Verify { t, file } => {
            let r = io::verify_file(&file, t)?;
            for l in &r.profile.levels {
                if l.is_design() {
                    println!("λ{} = {}", l.s, l.min);
                } else {
                    println!(
                        "λ{} ranges {}..={} (e.g. {:?} in {}, {:?} in {})",
                        l.s, l.min, l.max, l.min_witness, l.min, l.max_witness, l.max
                    );
                }
            }
            if let Some(b) = &r.repeated {
                println!("repeated block {b:?}");
            }
            let simple = if r.is_simple() { "simple" } else { "not simple" };
            match r.label(t) {
                Some(label) => println!("{label}, {simple}"),
                None => println!("not a {t}-design, {simple}"),
            }
            r.check(t)?;
            Ok(())
        }
        Command::ResolveCheck { file, classes } => {
            let (r, declared) = io::read_resolution(&file, &classes)?;
            let sigma = verify_resolution(&r)?;
            println!("{} classes of {} blocks, σ={}", r.w(), r.class(0).len(), sigma);
            if sigma != declared {
                return Err(Error::Verification(format!("declared σ = {declared}, counted {sigma}")));
            }
            Ok(())
        }
        Command::ResolveBuild {
            spec_from,
            design,
            out,
            classes,
        } => {
            let prov = ProvenanceFile::read(&spec_from)?;
            let path = match design.or_else(|| prov.design.clone()) {
                Some(p) => p,
                None => return Err(Error::InvalidParameters("no design file recorded; pass --design".into())),
            };
            let (d, _) = io::read_design(&path)?;
            let records = prov.provenance();
            if records.len() != d.len() {
                return Err(Error::InvalidParameters(format!(
                    "sidecar has {} records for {} blocks",
                    records.len(),
                    d.len()
                )));
            }
            let sigmas = pair_sigmas(&prov.summary)?;
            let choice = find_multipliers(
                &sigmas.iter().map(|s| s.sigma).collect::<Vec<_>>(),
                &sigmas.iter().map(|s| s.cell_count).collect::<Vec<_>>(),
            )?;
            println!("multipliers {:?}, σ={}", choice.multipliers, choice.sigma);
            let r = partition_constructed(&d, &records, &sigmas, &choice)?;
            write_resolution(&r, &out, &classes)?;
            Ok(())
        }
        Command::Baranyai { v, k, out, classes } => {
            write_resolution(&baranyai_parallelism(v, k)?, &out, &classes)?;
            Ok(())
        }
        Command::Orbits { v, k, out, classes } => {
            write_resolution(&cyclic_orbit_resolution(v, k)?, &out, &classes)?;
            Ok(())
        }
        Command::Onefactor { v, out, classes } => {
            write_resolution(&round_robin_one_factorization(v)?, &out, &classes)?;
            Ok(())
        }
        Command::Counts { family, json } => {
            let build = family.request()?.build()?;
            let s = compute_counts(&build.spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&s)?);
            } else {
                print_summary(&s);
                println!("closed form: {}", build.label());
            }
            Ok(())
        }
        Command::SolveAb { v, k } => {
            let ab = compute_ab(v, k)?;
            let r = ab.ratio();
            println!("A={} B={} ratio={}", ab.a, ab.b, r);
            if let Some(s) = simplified_ab_ratio(v, k) {
                if s != r {
                    println!("note: the simplified form for k={k} gives {s}, not {r}");
                }
            }
            let z1_max = ((v - 1) / 2) as u128;
            let z2_max = tridesign::combinatorics::binomial((v - 1) as u64, k as u64).unwrap_or(0) / (k as u128 + 1);
            let (p, q) = (*r.numer(), *r.denom());
            let sols = if p > 0 { solve_z(p as u128, q as u128, z1_max, z2_max) } else { vec![] };
            match (sols.first(), sols.last()) {
                (Some(a), Some(b)) => println!(
                    "admissible (z1,z2): {} solutions, {:?} to {:?} (z1 ≤ {z1_max}, z2 ≤ {z2_max})",
                    sols.len(),
                    a,
                    b
                ),
                _ => println!("no admissible (z1,z2) with z1 ≤ {z1_max}, z2 ≤ {z2_max}"),
            }
            if v <= 2 * k {
                println!("v ≤ 2k: outside the family range");
            }
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        "invalid-parameters" | "validation" => 3,
        "verification" | "resolution" => 4,
        _ => 5,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error[invalid-parameters]: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(exit_code(&e))
        }
    }
}
