mod fixtures;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dual_braid::dual::{DualAlgebra, DualElement};
use dual_braid::garside::{series_inverse, DualMonoid};
use dual_braid::nichols::Nichols;
use dual_braid::os::{os_dims, parallel_table, IntersectionLattice};
use dual_braid::resolution::Resolution;
use dual_braid::svg::fan_svg;
use dual_braid::verify::{self, Context, Options, Status};
use dual_braid::{Error, GroupSpec, Result};

use report::{envelope, q_json, q_list};

/// Reports on dual braid monoids, positive cluster complexes and their Koszul duals.
#[derive(Parser)]
#[command(name = "dual-braid", version)]
struct Cli {
    /// Print a flattened table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Group and Coxeter word, e.g. `A3:1,2,3` or `B3`.
    #[arg(long, short, value_parser = parse_group)]
    group: GroupSpec,
    /// Reflection ordering to use instead of the sorting-word one, names separated by spaces.
    #[arg(long)]
    order: Option<String>,
}

fn parse_group(s: &str) -> std::result::Result<GroupSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// The noncrossing partition lattice.
    Nc {
        #[command(flatten)]
        g: GroupArgs,
        /// Restrict to elements fixed by conjugation with `c^i`.
        #[arg(long)]
        fixed: Option<i64>,
    },
    /// The dual braid monoid.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// The positive cluster complex.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// The minimal free resolution of the ground field.
    #[command(subcommand)]
    Resolution(ResolutionCmd),
    /// The Koszul dual algebra in its face basis.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// The Nichols algebra picture of the Koszul dual.
    #[command(subcommand)]
    Nichols(NicholsCmd),
    /// Orlik-Solomon dimensions through flags of flats.
    #[command(subcommand)]
    Os(OsCmd),
    /// Every consistency check for one group; exits 1 if any fails.
    VerifyAll {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
        #[arg(long, default_value_t = 1000)]
        lambda_pairs: usize,
    },
    /// Reference facet lists.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
    /// Fan pictures for every supported group of rank at most 3.
    Plots {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum MonoidCmd {
    /// Number of elements of each degree.
    Growth {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        fixed: Option<i64>,
        #[arg(long, default_value_t = 6)]
        max_deg: usize,
    },
    /// Left-greedy normal form of a product of reflections.
    NormalForm {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum ClusterCmd {
    /// Facets as descending reflection words.
    Facets {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Face counts by size, starting with the empty face.
    Fvector {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Reduced Betti numbers of every lower interval subcomplex.
    Homology {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// SVG picture of the fan, rank at most 3.
    FanSvg {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ResolutionCmd {
    /// Exactness, minimality and splitting degree by degree.
    Verify {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Dimensions of the graded pieces.
    Hilbert {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Face basis grouped by lattice element.
    Basis {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Expands a product of generators in the face basis.
    Product {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        word: String,
        /// Use the cone rule instead of rewriting.
        #[arg(long)]
        geometric: bool,
    },
    /// Traces of conjugation by `c^i` on each graded piece.
    Character {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        power: i64,
    },
    /// The quadratic relations.
    Relations {
        #[command(flatten)]
        g: GroupArgs,
    },
}

#[derive(Subcommand)]
enum NicholsCmd {
    /// Dimension of one graded component of the quotient.
    Dim {
        #[command(flatten)]
        g: GroupArgs,
        /// `e`, `c`, or a product of reflection names.
        #[arg(long, default_value = "c")]
        w: String,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value_t = 200_000)]
        max_words: usize,
    },
    /// Top homology of the lattice seen inside the top component.
    Homology {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Compares the Koszul dual with the quotient of the Nichols algebra.
    PsiCheck {
        #[command(flatten)]
        g: GroupArgs,
    },
}

#[derive(Subcommand)]
enum OsCmd {
    /// Graded dimensions by flat.
    Dims {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Rank-by-rank comparison with the noncrossing lattice.
    Parallel {
        #[command(flatten)]
        g: GroupArgs,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Regenerates the reference files.
    Write {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
    /// Rebuilds every reference file and compares.
    Check {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

/// A report together with whether every check in it held.
struct Outcome {
    value: Value,
    ok: bool,
}

fn done(command: &str, ctx: Option<&Context>, body: Value) -> Outcome {
    checked(command, ctx, body, true)
}

fn checked(command: &str, ctx: Option<&Context>, body: Value, ok: bool) -> Outcome {
    let group = ctx.map(|c| c.group.spec.to_string());
    Outcome {
        value: envelope(command, group, body),
        ok,
    }
}

fn context(g: &GroupArgs) -> Result<Context> {
    match &g.order {
        Some(o) => Context::with_order(g.group.clone(), &o.split_whitespace().collect::<Vec<_>>()),
        None => Context::build(g.group.clone()),
    }
}

fn threads() -> usize {
    std::env::var("DUAL_BRAID_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn reflection_word(ctx: &Context, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|n| {
            ctx.group
                .reflection_by_name(n)
                .ok_or_else(|| Error::Argument(format!("unknown reflection {n}")))
        })
        .collect()
}

fn face_names(ctx: &Context, verts: &[usize]) -> Vec<String> {
    verts.iter().map(|&t| ctx.group.reflection_name(t)).collect()
}

fn nc_name(ctx: &Context, w: usize) -> String {
    ctx.group.element_name(ctx.nc.element(w))
}

fn element_json(ctx: &Context, x: &DualElement) -> Value {
    Value::Array(
        x.terms()
            .map(|(f, c)| json!({"face": face_names(ctx, &ctx.complex.face(f).verts), "coefficient": q_json(c)}))
            .collect(),
    )
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Nc { g, fixed } => {
            let ctx = context(&g)?;
            match fixed {
                None => {
                    let body = serde_json::to_value(ctx.nc.export(&ctx.group)).expect("export serializes");
                    Ok(done("nc", Some(&ctx), body))
                }
                Some(i) => {
                    let sub = ctx.nc.fixed_subposet(i);
                    let names: Vec<String> = sub.elements.iter().map(|&w| nc_name(&ctx, w)).collect();
                    Ok(done(
                        "nc",
                        Some(&ctx),
                        json!({
                            "power": i,
                            "elements": names,
                            "moebius": sub.moebius,
                            "rank_sizes": sub.rank_sizes,
                            "moebius_polynomial": sub.moebius_polynomial(&ctx.nc),
                        }),
                    ))
                }
            }
        }
        Command::Monoid(MonoidCmd::Growth { g, fixed, max_deg }) => {
            let ctx = context(&g)?;
            let dm = DualMonoid::new(&ctx.group, &ctx.nc);
            let (growth, poly) = match fixed {
                None => (dm.growth_series(max_deg), ctx.nc.moebius_polynomial()),
                Some(i) => (
                    dm.fixed_growth(i, max_deg),
                    ctx.nc.fixed_subposet(i).moebius_polynomial(&ctx.nc),
                ),
            };
            let inverse = series_inverse(&poly, max_deg);
            let ok = growth == inverse;
            let s = |v: &[i128]| v.iter().map(|x| json!(x)).collect::<Vec<_>>();
            Ok(checked(
                "monoid growth",
                Some(&ctx),
                json!({
                    "fixed": fixed,
                    "coefficients": s(&growth),
                    "moebius_polynomial": poly,
                    "moebius_inverse": s(&inverse),
                    "matches": ok,
                }),
                ok,
            ))
        }
        Command::Monoid(MonoidCmd::NormalForm { g, word }) => {
            let ctx = context(&g)?;
            let w = reflection_word(&ctx, &word)?;
            let dm = DualMonoid::new(&ctx.group, &ctx.nc);
            let nf = dm.normal_form(&w);
            let simples: Vec<String> = nf.simples().iter().map(|&u| nc_name(&ctx, u)).collect();
            Ok(done(
                "monoid normal-form",
                Some(&ctx),
                json!({"word": face_names(&ctx, &w), "degree": dm.degree(&nf), "normal_form": simples}),
            ))
        }
        Command::Cluster(ClusterCmd::Facets { g }) => {
            let ctx = context(&g)?;
            let facets: Vec<Vec<String>> = ctx.complex.facets.iter().map(|f| face_names(&ctx, f)).collect();
            Ok(done(
                "cluster facets",
                Some(&ctx),
                json!({"order": face_names(&ctx, ctx.complex.order.sequence()), "count": facets.len(), "facets": facets}),
            ))
        }
        Command::Cluster(ClusterCmd::Fvector { g }) => {
            let ctx = context(&g)?;
            Ok(done("cluster fvector", Some(&ctx), json!({"f_vector": ctx.complex.f_vector()})))
        }
        Command::Cluster(ClusterCmd::Homology { g }) => {
            let ctx = context(&g)?;
            let rows = dual_braid::resolution::subcomplex_homology(&ctx.nc, &ctx.complex)?;
            let ok = rows.iter().all(|(_, b)| b.iter().all(|&x| x == 0));
            let elements: Vec<Value> = rows
                .iter()
                .map(|(w, b)| json!({"element": nc_name(&ctx, *w), "reduced_betti": b}))
                .collect();
            Ok(checked(
                "cluster homology",
                Some(&ctx),
                json!({"acyclic": ok, "elements": elements}),
                ok,
            ))
        }
        Command::Cluster(ClusterCmd::FanSvg { g, output }) => {
            let ctx = context(&g)?;
            let fan = fan_svg(&ctx.group, &ctx.complex)?;
            let mut body = json!({"rays": fan.rays, "sectors": fan.sectors});
            match output {
                Some(path) => {
                    std::fs::write(&path, &fan.svg)
                        .map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
                    body["output"] = json!(path.display().to_string());
                }
                None => body["svg"] = json!(fan.svg),
            }
            Ok(done("cluster fan-svg", Some(&ctx), body))
        }
        Command::Resolution(ResolutionCmd::Verify { g, max_deg }) => {
            let ctx = context(&g)?;
            let res = Resolution::new(&ctx.group, &ctx.nc, &ctx.complex);
            let reports = res.graded_exactness(max_deg)?;
            let ok = reports
                .iter()
                .all(|r| r.exact && r.minimal && r.d_squared_zero && r.theta_split && r.euler_characteristic == 0);
            Ok(checked(
                "resolution verify",
                Some(&ctx),
                json!({"passed": ok, "degrees": reports}),
                ok,
            ))
        }
        Command::Algebra(AlgebraCmd::Hilbert { g }) => {
            let ctx = context(&g)?;
            let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
            Ok(done("algebra hilbert", Some(&ctx), json!({"coefficients": alg.hilbert()})))
        }
        Command::Algebra(AlgebraCmd::Basis { g }) => {
            let ctx = context(&g)?;
            let mut ok = true;
            let rows: Vec<Value> = (0..ctx.nc.len())
                .map(|w| {
                    let faces = ctx.complex.faces_with_nc(w);
                    let m = ctx.nc.moebius(w);
                    ok &= faces.len() as i64 == m.abs();
                    json!({
                        "element": nc_name(&ctx, w),
                        "moebius": m,
                        "faces": faces.iter().map(|&f| face_names(&ctx, &ctx.complex.face(f).verts)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(checked("algebra basis", Some(&ctx), json!({"matches": ok, "elements": rows}), ok))
        }
        Command::Algebra(AlgebraCmd::Product { g, word, geometric }) => {
            let ctx = context(&g)?;
            let w = reflection_word(&ctx, &word)?;
            let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
            let x = if geometric { alg.multiply_geometric(&w)? } else { alg.rewrite(&w)? };
            Ok(done(
                "algebra product",
                Some(&ctx),
                json!({"word": face_names(&ctx, &w), "method": if geometric { "geometric" } else { "rewrite" }, "terms": element_json(&ctx, &x)}),
            ))
        }
        Command::Algebra(AlgebraCmd::Character { g, power }) => {
            let ctx = context(&g)?;
            let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
            let tr = alg.cyclic_character(power)?;
            let fixed = alg.fixed_moebius_character(power);
            let ok = tr == fixed;
            Ok(checked(
                "algebra character",
                Some(&ctx),
                json!({"power": power, "traces": q_list(&tr), "fixed_moebius": q_list(&fixed), "matches": ok}),
                ok,
            ))
        }
        Command::Algebra(AlgebraCmd::Relations { g }) => {
            let ctx = context(&g)?;
            let alg = DualAlgebra::new(&ctx.group, &ctx.nc, &ctx.complex);
            let rels = alg.relations();
            let ok = rels.covers_each_pair_once(ctx.group.num_reflections());
            let list: Vec<Value> = rels
                .as_linear_combinations()
                .iter()
                .map(|r| {
                    Value::Array(
                        r.iter()
                            .map(|(w, c)| json!({"word": face_names(&ctx, w), "coefficient": c}))
                            .collect(),
                    )
                })
                .collect();
            Ok(checked(
                "algebra relations",
                Some(&ctx),
                json!({"count": list.len(), "covers_each_pair_once": ok, "relations": list}),
                ok,
            ))
        }
        Command::Nichols(NicholsCmd::Dim { g, w, j, max_words }) => {
            let ctx = context(&g)?;
            let elem = ctx.group.parse_element(&w)?;
            let j = j.unwrap_or_else(|| ctx.group.reflection_length(&elem));
            let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
            let dim = nic.component_dim(&elem, j, max_words)?;
            Ok(done(
                "nichols dim",
                Some(&ctx),
                json!({"w": ctx.group.element_name(&elem), "j": j, "dimension": dim}),
            ))
        }
        Command::Nichols(NicholsCmd::Homology { g }) => {
            let ctx = context(&g)?;
            let rep = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex).nc_top_homology()?;
            let ok = rep.passed();
            Ok(checked(
                "nichols homology",
                Some(&ctx),
                serde_json::to_value(rep).expect("report serializes"),
                ok,
            ))
        }
        Command::Nichols(NicholsCmd::PsiCheck { g }) => {
            let ctx = context(&g)?;
            let rep = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex).psi_check()?;
            let ok = rep.passed();
            let mut body = serde_json::to_value(rep).expect("report serializes");
            body["passed"] = json!(ok);
            Ok(checked("nichols psi-check", Some(&ctx), body, ok))
        }
        Command::Os(OsCmd::Dims { g }) => {
            let ctx = context(&g)?;
            let lattice = IntersectionLattice::build(&ctx.group)?;
            let nic = Nichols::new(&ctx.group, &ctx.nc, &ctx.complex);
            let rep = os_dims(&nic, &lattice);
            let ok = rep.passed();
            let mut body = serde_json::to_value(rep).expect("report serializes");
            body["passed"] = json!(ok);
            Ok(checked("os dims", Some(&ctx), body, ok))
        }
        Command::Os(OsCmd::Parallel { g }) => {
            let ctx = context(&g)?;
            let lattice = IntersectionLattice::build(&ctx.group)?;
            let rows = parallel_table(&ctx.nc, &lattice);
            Ok(done("os parallel", Some(&ctx), json!({"ranks": rows})))
        }
        Command::VerifyAll { g, seed, max_deg, lambda_pairs } => {
            let ctx = context(&g)?;
            let opts = Options {
                seed,
                max_deg,
                lambda_pairs,
                ..Options::default()
            };
            let checks = verify::verify_all(&ctx, &opts, threads());
            let ok = checks.iter().all(|c| c.status != Status::Failed);
            Ok(checked(
                "verify-all",
                Some(&ctx),
                json!({"passed": ok, "seed": seed, "checks": checks}),
                ok,
            ))
        }
        Command::Fixtures(FixturesCmd::Write { dir }) => {
            let files = fixtures::write_all(&dir)?;
            Ok(done("fixtures write", None, json!({"files": files})))
        }
        Command::Fixtures(FixturesCmd::Check { dir }) => {
            let results = fixtures::check_dir(&dir)?;
            let ok = !results.is_empty() && results.iter().all(|r| r.matches);
            Ok(checked("fixtures check", None, json!({"passed": ok, "fixtures": results}), ok))
        }
        Command::Plots { dir } => {
            std::fs::create_dir_all(&dir).map_err(|e| Error::Argument(format!("{}: {e}", dir.display())))?;
            let mut files = Vec::new();
            for name in ["A1", "A2", "B2", "G2", "A3", "B3"] {
                let ctx = Context::build(name.parse()?)?;
                let fan = fan_svg(&ctx.group, &ctx.complex)?;
                let path = dir.join(format!("fan_{}.svg", name.to_lowercase()));
                std::fs::write(&path, &fan.svg)
                    .map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
                files.push(json!({"group": ctx.group.spec.to_string(), "file": path.display().to_string(), "rays": fan.rays, "sectors": fan.sectors}));
            }
            Ok(done("plots", None, json!({"files": files})))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!("{}", json!({"schema": report::SCHEMA, "error": "config", "message": msg.trim()}));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            if cli.pretty {
                print!("{}", report::pretty(&out.value));
            } else {
                println!("{}", out.value);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (kind, code) = match e {
                Error::Config(_) => ("config", 2),
                Error::Argument(_) => ("argument", 2),
                Error::Invariant(_) => ("invariant", 1),
            };
            eprintln!("{}", json!({"schema": report::SCHEMA, "error": kind, "message": e.to_string()}));
            ExitCode::from(code)
        }
    }
}
