mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use congruent_core::construction::double_int_triangle;
use congruent_core::curve::phi;
use congruent_core::descent::w_map_bounded;
use congruent_core::param::require_membership;
use congruent_core::{
    add_params, conj_diff_triangle, conj_sum_triangle, coset_candidates, generators, halve_param,
    isogeny, iterate_double, param_from_triangle, parse_rat, phi_inv, psi_map, reduce, sub_params,
    triangle_from_param, triangle_from_point, CongruentParam, Curve, CurvePoint, Error,
    FactorBound, Member, Param, ParamOrIdentity, QuadTriangle, Rat, RepresentativeSet, Triangle,
};
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use cache::SearchCache;
use output::Output;

/// Largest accepted trial-division bound; the prime sieve is held in memory.
const MAX_FACTOR_BOUND: u64 = 100_000_000;

#[derive(Parser)]
#[command(
    name = "congruent",
    version,
    about = "Exact arithmetic on rational right triangles of a fixed area"
)]
struct Cli {
    /// Area A, as an integer or p/q
    #[arg(long, global = true, value_name = "RAT")]
    area: Option<String>,

    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Trial-division bound for square classes
    #[arg(long, global = true, value_name = "N", default_value_t = FactorBound::DEFAULT.0)]
    factor_bound: u64,

    /// JSON-lines file caching search results per (area, bound)
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameter of a right triangle X,Y,Z (with --area, its certificate)
    Param { triangle: String },
    /// Primitive integer triangle of a parameter
    Triangle { t: String },
    /// Double a parameter, or an integer triangle with --int
    Double {
        input: String,
        /// Number of doublings to list
        #[arg(long, default_value_t = 1)]
        times: usize,
        /// Treat the input as an integer triangle X,Y,Z
        #[arg(long)]
        int: bool,
    },
    /// Combine two parameters by the addition formula
    Add { t1: String, t2: String },
    /// Combine two parameters by the subtraction formula
    Sub { t1: String, t2: String },
    /// Halve a parameter whose 1-t and 1+t are squares
    Halve { t: String },
    /// All primitive parameters up to a denominator bound
    Search {
        #[arg(long, value_name = "N")]
        denom_bound: u64,
        /// Also count parameters whose triangle has a square leg
        #[arg(long)]
        square_legs: bool,
    },
    /// Square classes of 1-t and 1+t
    Wmap { t: String },
    /// Candidate W-images for an integer area
    Cosets,
    /// Write a parameter in terms of representatives and a small parameter
    Reduce {
        t: String,
        #[command(flatten)]
        reps: RepsArgs,
    },
    /// Parameters below twice the largest representative denominator
    Generators {
        #[command(flatten)]
        reps: RepsArgs,
    },
    /// Operations on the curve y² = x³ - A²x
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Triangles over Q(√d) and their conjugates
    #[command(subcommand)]
    Quad(QuadCommand),
}

#[derive(Args)]
struct RepsArgs {
    /// Representatives, comma separated (0 is added if missing)
    #[arg(long, value_name = "LIST")]
    reps: Option<String>,
    /// Search bound used to build representatives when --reps is absent;
    /// with --reps, an explicit bound for generators
    #[arg(long, value_name = "N")]
    denom_bound: Option<u64>,
}

#[derive(Subcommand)]
enum CurveCommand {
    Double {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    Add {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    Sub {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    Mul {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Point (A/t, rA²/t²) of a parameter
    Phi { t: String },
    /// Parameter of a point (0 for torsion)
    PhiInv {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Point of a right triangle on the curve of its own area
    Psi { triangle: String },
    /// The order-two map (x,y) -> (A(x+A)/(x-A), 2y(A/(x-A))²)
    Isogeny {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
    /// Triangle of area A from a point
    Triangle {
        #[arg(allow_hyphen_values = true)]
        p: String,
    },
}

#[derive(Subcommand)]
enum QuadCommand {
    /// P + conj(P): a rational triangle of area A
    Sum { triangle: String },
    /// P - conj(P): a rational triangle of area A·d
    Diff { triangle: String },
}

/// A failure with its exit code.
enum Failure {
    Usage(String),
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        if e.is_internal() {
            return Failure::Internal(msg);
        }
        match e {
            Error::Parse { .. }
            | Error::ParamOutOfRange(_)
            | Error::NotRightTriangle(_)
            | Error::InvalidArea(_)
            | Error::AreaMismatch(..)
            | Error::NotOnCurve(_)
            | Error::InvalidRepresentatives(_) => Failure::Usage(msg),
            _ => Failure::Domain(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(format!("cache: {e}"))
    }
}

type Outcome = Result<Output, Failure>;

struct Ctx {
    area: Option<Rat>,
    bound: FactorBound,
    cache: SearchCache,
}

impl Ctx {
    fn area(&self) -> Result<&Rat, Failure> {
        self.area
            .as_ref()
            .ok_or_else(|| Failure::Usage("this command needs --area".into()))
    }

    fn curve(&self) -> Result<Curve, Failure> {
        Ok(Curve::for_area(self.area()?))
    }

    fn member(&self, s: &str) -> Result<Member, Failure> {
        Ok(match s.parse::<ParamOrIdentity>()? {
            ParamOrIdentity::Identity => Member::Identity,
            ParamOrIdentity::Param(p) => Member::Param(require_membership(&p, self.area()?)?),
        })
    }

    fn param(&self, s: &str) -> Result<CongruentParam, Failure> {
        let p: Param = s.parse()?;
        Ok(require_membership(&p, self.area()?)?)
    }

    fn point(&self, s: &str) -> Result<CurvePoint, Failure> {
        let p: CurvePoint = s.parse()?;
        self.curve()?.check(&p)?;
        Ok(p)
    }

    fn report(&self, t: &CongruentParam) -> Result<(String, Value), Failure> {
        let w = w_map_bounded(&ParamOrIdentity::Param(t.param().clone()), self.bound)?;
        Ok((output::report_line(t, &w), output::report_json(t, &w)))
    }

    fn representatives(&self, args: &RepsArgs) -> Result<RepresentativeSet, Failure> {
        let area = self.area()?;
        match &args.reps {
            Some(list) => {
                let reps = list
                    .split(',')
                    .map(|s| s.trim().parse::<ParamOrIdentity>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(RepresentativeSet::with_factor_bound(
                    area, &reps, self.bound,
                )?)
            }
            None => {
                let bound = args.denom_bound.ok_or_else(|| {
                    Failure::Usage("give --reps or a --denom-bound to search for them".into())
                })?;
                let found = self.cache.search(area, bound)?;
                let r = RepresentativeSet::from_search(area, &found, self.bound)?;
                log::warn!(
                    "representatives taken from a search up to denominator {bound}; completeness is not certified"
                );
                Ok(r)
            }
        }
    }
}

fn parse_triangle(s: &str) -> Result<Triangle, Failure> {
    Ok(s.parse()?)
}

fn run(cli: Cli) -> Outcome {
    if cli.factor_bound < 2 || cli.factor_bound > MAX_FACTOR_BOUND {
        return Err(Failure::Usage(format!(
            "--factor-bound must be between 2 and {MAX_FACTOR_BOUND}"
        )));
    }
    let area = match &cli.area {
        Some(s) => {
            let a = parse_rat(s)?;
            if !a.is_positive() {
                return Err(Error::InvalidArea(a).into());
            }
            Some(a)
        }
        None => None,
    };
    let ctx = Ctx {
        area,
        bound: FactorBound(cli.factor_bound),
        cache: SearchCache::new(cli.cache),
    };
    match cli.command {
        Command::Param { triangle } => param_cmd(&ctx, &triangle),
        Command::Triangle { t } => {
            let p: Param = t.parse()?;
            let tri = triangle_from_param(&p);
            Ok(Output::single(tri.to_string(), output::triangle(&tri)))
        }
        Command::Double { input, times, int } => double_cmd(&ctx, &input, times, int),
        Command::Add { t1, t2 } => combine_cmd(&ctx, &t1, &t2, add_params),
        Command::Sub { t1, t2 } => combine_cmd(&ctx, &t1, &t2, sub_params),
        Command::Halve { t } => {
            let h = halve_param(&ctx.param(&t)?)?;
            Ok(Output::single(
                format!("t={} u={} v={}", h.half, h.u, h.v),
                json!({ "t": h.half.to_string(), "u": output::rat(&h.u), "v": output::rat(&h.v) }),
            ))
        }
        Command::Search {
            denom_bound,
            square_legs,
        } => search_cmd(&ctx, denom_bound, square_legs),
        Command::Wmap { t } => {
            let t: ParamOrIdentity = t.parse()?;
            let w = w_map_bounded(&t, ctx.bound)?;
            Ok(Output::single(
                w.to_string(),
                json!({ "w1": w.c1.to_string(), "w2": w.c2.to_string() }),
            ))
        }
        Command::Cosets => cosets_cmd(&ctx),
        Command::Reduce { t, reps } => reduce_cmd(&ctx, &t, &reps),
        Command::Generators { reps } => generators_cmd(&ctx, &reps),
        Command::Curve(c) => curve_cmd(&ctx, c),
        Command::Quad(q) => quad_cmd(&ctx, q),
    }
}

fn param_cmd(ctx: &Ctx, triangle: &str) -> Outcome {
    let p = param_from_triangle(&parse_triangle(triangle)?);
    if ctx.area.is_none() {
        return Ok(Output::single(p.to_string(), Value::String(p.to_string())));
    }
    let t = require_membership(&p, ctx.area()?)?;
    let (line, json) = ctx.report(&t)?;
    Ok(Output::single(line, json))
}

fn double_cmd(ctx: &Ctx, input: &str, times: usize, int: bool) -> Outcome {
    if times == 0 {
        return Err(Failure::Usage("--times must be at least 1".into()));
    }
    if int {
        let mut tri = parse_triangle(input)?;
        if !tri.is_integral() {
            return Err(Failure::Usage(format!("{tri} is not an integer triangle")));
        }
        let mut lines = Vec::new();
        let mut json = Vec::new();
        for _ in 0..times {
            tri = double_int_triangle(&tri);
            lines.push(tri.to_string());
            json.push(output::triangle(&tri));
        }
        return Ok(Output::new(lines, Value::Array(json)));
    }
    let chain = iterate_double(&ctx.param(input)?, times + 1);
    let doubled = &chain[1..];
    let lines = doubled.iter().map(|t| t.to_string()).collect();
    let json = doubled
        .iter()
        .map(|t| Value::String(t.to_string()))
        .collect();
    Ok(Output::new(lines, Value::Array(json)))
}

fn combine_cmd(
    ctx: &Ctx,
    t1: &str,
    t2: &str,
    op: fn(&Member, &Member) -> congruent_core::Result<Member>,
) -> Outcome {
    let r = op(&ctx.member(t1)?, &ctx.member(t2)?)?;
    Ok(Output::single(r.to_string(), Value::String(r.to_string())))
}

fn search_cmd(ctx: &Ctx, bound: u64, square_legs: bool) -> Outcome {
    let found = ctx.cache.search(ctx.area()?, bound)?;
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for t in &found {
        let (line, json) = ctx.report(t)?;
        lines.push(line);
        rows.push(json);
    }
    if !square_legs {
        return Ok(Output::new(lines, Value::Array(rows)));
    }
    // counted at this bound only; no density claim is made
    let with_square = found
        .iter()
        .filter(|t| {
            let tri = triangle_from_param(t.param());
            [&tri.x, &tri.y]
                .iter()
                .any(|leg| congruent_core::arith::is_rational_square(leg))
        })
        .count();
    lines.push(format!("square-leg: {with_square} of {}", found.len()));
    Ok(Output::new(
        lines,
        json!({ "params": rows, "square_leg": with_square, "total": found.len() }),
    ))
}

fn cosets_cmd(ctx: &Ctx) -> Outcome {
    let area = ctx.area()?;
    let n = if area.is_integer() {
        area.to_integer().to_u64()
    } else {
        None
    };
    let n = n.ok_or_else(|| {
        Failure::Usage(format!("cosets needs a positive integer area, got {area}"))
    })?;
    let cands = coset_candidates(n);
    let lines = cands.iter().map(|w| w.to_string()).collect();
    let json = cands
        .iter()
        .map(|w| json!({ "w1": w.c1.to_string(), "w2": w.c2.to_string() }))
        .collect();
    Ok(Output::new(lines, Value::Array(json)))
}

fn reduce_cmd(ctx: &Ctx, t: &str, reps: &RepsArgs) -> Outcome {
    let r = ctx.representatives(reps)?;
    let dec = reduce(&ctx.param(t)?, &r)?;
    dec.verify()?;
    let mut lines = Vec::new();
    let mut steps = Vec::new();
    for s in &dec.steps {
        lines.push(format!(
            "{} + {} = {} = 2·{}",
            s.from, s.rep, s.sum, s.halved
        ));
        steps.push(json!({
            "from": s.from.to_string(),
            "rep": s.rep.to_string(),
            "sum": s.sum.to_string(),
            "halved": s.halved.to_string(),
        }));
    }
    let (terms, top) = dec.relation();
    let lhs: Vec<String> = std::iter::once(dec.target.to_string())
        .chain(terms.iter().map(|(m, c)| {
            if c.is_one() {
                format!("({m})")
            } else {
                format!("{c}·({m})")
            }
        }))
        .collect();
    lines.push(format!("{} = {top}·({})", lhs.join(" + "), dec.last));
    lines.push(format!("final={}", dec.last));
    Ok(Output::new(
        lines,
        json!({
            "target": dec.target.to_string(),
            "steps": steps,
            "final": dec.last.to_string(),
            "relation": {
                "terms": terms.iter().map(|(m, c)| json!({ "rep": m.to_string(), "coeff": c.to_string() })).collect::<Vec<_>>(),
                "final_coeff": top.to_string(),
            },
        }),
    ))
}

fn generators_cmd(ctx: &Ctx, reps: &RepsArgs) -> Outcome {
    let r = ctx.representatives(reps)?;
    let bound = if reps.reps.is_some() {
        reps.denom_bound
    } else {
        None
    };
    let gens = generators(&r, bound)?;
    if gens.is_empty() {
        return Err(Failure::Domain("no parameters below the bound".into()));
    }
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for t in &gens {
        let (line, json) = ctx.report(t)?;
        lines.push(line);
        rows.push(json);
    }
    Ok(Output::new(lines, Value::Array(rows)))
}

fn point_out(p: &CurvePoint) -> Output {
    Output::single(p.to_string(), output::point(p))
}

fn curve_cmd(ctx: &Ctx, cmd: CurveCommand) -> Outcome {
    if let CurveCommand::Psi { triangle } = &cmd {
        let tri = parse_triangle(triangle)?;
        let p = psi_map(&tri);
        return Ok(Output::single(
            format!("{p} on E_{}", tri.area()),
            json!({ "point": output::point(&p), "area": output::rat(&tri.area()) }),
        ));
    }
    let e = ctx.curve()?;
    Ok(match cmd {
        CurveCommand::Double { p } => point_out(&e.double(&ctx.point(&p)?)),
        CurveCommand::Add { p, q } => point_out(&e.add(&ctx.point(&p)?, &ctx.point(&q)?)),
        CurveCommand::Sub { p, q } => point_out(&e.sub(&ctx.point(&p)?, &ctx.point(&q)?)),
        CurveCommand::Mul { n, p } => point_out(&e.mul(n, &ctx.point(&p)?)),
        CurveCommand::Phi { t } => point_out(&phi(&ctx.param(&t)?)),
        CurveCommand::PhiInv { p } => {
            let t = phi_inv(&e, &ctx.point(&p)?)?;
            Output::single(t.to_string(), Value::String(t.to_string()))
        }
        CurveCommand::Isogeny { p } => point_out(&isogeny(&e, &ctx.point(&p)?)),
        CurveCommand::Triangle { p } => {
            let tri = triangle_from_point(&e, &ctx.point(&p)?)?;
            Output::single(tri.to_string(), output::triangle(&tri))
        }
        CurveCommand::Psi { .. } => unreachable!("handled above"),
    })
}

fn quad_cmd(ctx: &Ctx, cmd: QuadCommand) -> Outcome {
    let (s, diff) = match &cmd {
        QuadCommand::Sum { triangle } => (triangle, false),
        QuadCommand::Diff { triangle } => (triangle, true),
    };
    let tri: QuadTriangle = s.parse()?;
    let area = match &ctx.area {
        Some(a) => a.clone(),
        None => {
            let a = tri.area();
            if !a.is_rational() {
                return Err(Failure::Domain(format!("triangle area {a} is irrational")));
            }
            a.rational_part().clone()
        }
    };
    let out = if diff {
        conj_diff_triangle(&tri, &area)?
    } else {
        conj_sum_triangle(&tri, &area)?
    };
    Ok(Output::new(
        vec![
            out.triangle.to_string(),
            format!("point={} on E_{}", out.point, out.curve_area),
        ],
        json!({
            "triangle": output::triangle(&out.triangle),
            "point": output::point(&out.point),
            "curve_area": output::rat(&out.curve_area),
        }),
    ))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            print!("{}", out.render(as_json));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
