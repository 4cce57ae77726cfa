use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use reldisc::combinat::{choose, format_rational};
use reldisc::discrepancy::{disc_exact, disc_single};
use reldisc::fourier::{decompose, top_sequences, truncate};
use reldisc::gk::{gk_table, prime_upper, G_of_k, MAX_EXACT_M};
use reldisc::hypergraph::{fano, multipartite_h, Hypergraph, SliceFunction};
use reldisc::inclusion::criterion;
use reldisc::io::{function_to_json, parse_input, SliceFunctionJson};
use reldisc::patterns::scan_bipartite_table;
use reldisc::wvector::{level_work, w1, w2_sq};
use reldisc::Error;

use crate::table::{Cell, Table};
use crate::{Cli, Command, Format};

pub const DEFAULT_MAX_WORK: u128 = 10_000_000_000;

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Refused {
        what: String,
        cost: u128,
        limit: u128,
    },
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Refused { .. } => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(msg) => write!(f, "error: {msg}"),
            Failure::Refused { what, cost, limit } => write!(
                f,
                "refused: {what}: estimated cost {cost} exceeds limit {limit}"
            ),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard { what, cost, limit } => Failure::Refused { what, cost, limit },
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn check_cost(what: &str, cost: u128, limit: u128) -> Result<(), Failure> {
    if cost > limit {
        return Err(Failure::Refused {
            what: what.to_string(),
            cost,
            limit,
        });
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_function(path: &Path) -> Result<SliceFunction, Failure> {
    Ok(parse_input(&read(path)?)?.into_function())
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    Ok(parse_input(&read(path)?)?.into_hypergraph()?)
}

/// `a..b`, inclusive at both ends.
fn parse_levels(spec: &str) -> Result<(usize, usize), Failure> {
    let bad = || invalid(format!("levels must look like a..b, got {spec:?}"));
    let (a, b) = spec.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn slice_cost(n: usize, k: usize) -> u128 {
    let len = choose(n, k) as u128;
    len.saturating_mul(len).saturating_mul(k as u128 + 1)
}

pub fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    let limit = cli.max_work;
    match &cli.command {
        Command::Wvec { input, levels } => wvec(&input.input, levels.as_deref(), format, limit),
        Command::Criterion { input, ell, output } => {
            criterion_cmd(&input.input, *ell, output.as_deref(), limit)
        }
        Command::Decompose { input } => decompose_cmd(&input.input, format, limit),
        Command::Truncate { input, ell } => {
            let f = read_function(&input.input)?;
            check_cost("truncation", slice_cost(f.n(), f.k()), limit)?;
            let mut out = function_to_json(&truncate(&f, *ell)?);
            out.push('\n');
            Ok(out)
        }
        Command::Gk { max, exact_limit } => gk(*max, *exact_limit, format, limit),
        Command::PrimeBound { max } => prime_bound(*max, format),
        Command::PatternScan { k, g } => pattern_scan(*k, *g, format, limit),
        Command::Disc { g_file, h_file } => disc(g_file, h_file, format, limit),
        Command::DiscSingle { g_file } => single(g_file, format, limit),
        Command::DesignCheck { input, t, lambda } => design(&input.input, *t, *lambda, format),
        Command::DemoFano => demo(format),
    }
}

fn wvec(path: &Path, levels: Option<&str>, format: Format, limit: u128) -> Outcome {
    let f = read_function(path)?;
    let (n, k) = (f.n(), f.k());
    let (lo, hi) = match levels {
        Some(s) => parse_levels(s)?,
        None => (1, k),
    };
    if lo < 1 || hi > k || n < 2 * hi {
        return Err(invalid(format!(
            "levels {lo}..{hi} need 1 <= a <= b <= k = {k} and n = {n} >= 2b"
        )));
    }
    let cost = (lo..=hi)
        .map(|r| level_work(n, k, r))
        .fold(0u128, u128::saturating_add);
    check_cost("W levels", cost.saturating_mul(2), limit)?;
    let mut table = Table::new(["r", "w2_sq", "w1"]);
    for r in lo..=hi {
        table.push(vec![
            r.into(),
            format_rational(&w2_sq(&f, r)?).into(),
            format_rational(&w1(&f, r)?).into(),
        ]);
    }
    Ok(table.render(format))
}

fn criterion_cmd(path: &Path, ell: usize, output: Option<&Path>, limit: u128) -> Outcome {
    let f = read_function(path)?;
    let (n, k) = (f.n(), f.k());
    if ell >= 1 && ell <= k {
        let cols = choose(n, ell - 1) as u128;
        let cost = (choose(n, k) as u128)
            .saturating_mul(cols)
            .saturating_mul(cols);
        check_cost("exact elimination", cost, limit)?;
    }
    let c = criterion(&f, ell)?;
    let h =
        c.h.as_ref()
            .map(|h| serde_json::to_value(SliceFunctionJson::from(h)).expect("serializes"));
    if let (Some(path), Some(h)) = (output, &c.h) {
        std::fs::write(path, function_to_json(h) + "\n")
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let out: Value = json!({ "ell": ell, "holds": c.holds, "h": h });
    Ok(out.to_string() + "\n")
}

fn decompose_cmd(path: &Path, format: Format, limit: u128) -> Outcome {
    let f = read_function(path)?;
    check_cost("decomposition", slice_cost(f.n(), f.k()), limit)?;
    let d = decompose(&f)?;
    let mut table = Table::new(["r", "dim", "norm_sq"]);
    for (r, norm) in d.norms_sq().iter().enumerate() {
        let dim = top_sequences(f.n(), r)?.len();
        table.push(vec![r.into(), dim.into(), format_rational(norm).into()]);
    }
    Ok(table.render(format))
}

fn gk(max: usize, exact_limit: usize, format: Format, limit: u128) -> Outcome {
    if max < 2 {
        return Err(invalid("--max must be at least 2"));
    }
    let exact = exact_limit.min(MAX_EXACT_M).min(max);
    let cost = (2..=exact).map(|m| 1u128 << (m + 1)).sum();
    check_cost("exhaustive scans", cost, limit)?;
    let mut table = Table::new(["k", "gamma", "g", "certificate"]);
    for row in gk_table(max, exact_limit)? {
        table.push(vec![
            row.k.into(),
            row.gamma.to_string().into(),
            row.g.to_string().into(),
            row.certificate.to_string().into(),
        ]);
    }
    Ok(table.render(format))
}

fn prime_bound(max: usize, format: Format) -> Outcome {
    if max < 2 {
        return Err(invalid("--max must be at least 2"));
    }
    let mut table = Table::new(["k", "prime_upper", "G"]);
    for k in 2..=max {
        table.push(vec![k.into(), prime_upper(k).into(), G_of_k(k).into()]);
    }
    Ok(table.render(format))
}

fn pattern_scan(k: usize, g: usize, format: Format, limit: u128) -> Outcome {
    if (2..=5).contains(&k) && g < k {
        let per: u128 = (k - g..=k).map(|r| level_work(2 * k, k, r)).sum();
        check_cost("pattern scan", per << (k + 1), limit)?;
    }
    let rows = scan_bipartite_table(k, g)?;
    let mut columns = vec!["alpha".to_string()];
    columns.extend((k - g..=k).map(|r| format!("w2_sq_{r}")));
    columns.push("vanishing".into());
    let mut table = Table::new(columns);
    for row in rows {
        let mut cells: Vec<Cell> = vec![row.alpha.to_string().into()];
        cells.extend(row.levels.values().map(|v| Cell::from(format_rational(v))));
        cells.push(row.vanishing.into());
        table.push(cells);
    }
    Ok(table.render(format))
}

fn join(vs: &[u32]) -> String {
    vs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn disc(g_file: &Path, h_file: &Path, format: Format, limit: u128) -> Outcome {
    let g = read_hypergraph(g_file)?;
    let h = read_hypergraph(h_file)?;
    if g.n() <= 34 {
        let perms: u128 = (1..=g.n() as u128).product();
        let cost = perms.saturating_mul((h.edge_count() * h.k()).max(1) as u128);
        check_cost("permutation scan", cost, limit)?;
    }
    let d = disc_exact(&g, &h)?;
    let mut table = Table::new([
        "value",
        "baseline",
        "witness",
        "min_overlap",
        "max_overlap",
        "permutations",
    ]);
    table.push(vec![
        format_rational(&d.value).into(),
        format_rational(&d.baseline).into(),
        join(&d.witness).into(),
        d.min_overlap.into(),
        d.max_overlap.into(),
        d.permutations.into(),
    ]);
    Ok(table.render(format))
}

fn single(g_file: &Path, format: Format, limit: u128) -> Outcome {
    let g = read_hypergraph(g_file)?;
    let n = g.n();
    if n < 100 {
        let deg = if g.k() == 0 {
            0
        } else {
            choose(n - 1, g.k() - 1) as u128
        };
        check_cost("subset scan", (1u128 << n).saturating_mul(deg + 1), limit)?;
    }
    let s = disc_single(&g)?;
    let mut table = Table::new(["value", "witness"]);
    table.push(vec![
        format_rational(&s.value).into(),
        join(&s.witness).into(),
    ]);
    Ok(table.render(format))
}

fn design(path: &Path, t: usize, lambda: Option<u64>, format: Format) -> Outcome {
    let g = read_hypergraph(path)?;
    let degrees = g.r_set_degrees(t)?;
    let common = degrees
        .first()
        .copied()
        .filter(|&d| degrees.iter().all(|&x| x == d));
    let (shown, is_design) = match lambda {
        Some(l) => (Some(l), g.is_block_design(t, l)?),
        None => (common, common.is_some()),
    };
    let mut table = Table::new(["t", "lambda", "design"]);
    let shown: Cell = shown.map_or_else(|| "-".into(), Cell::from);
    table.push(vec![t.into(), shown, is_design.into()]);
    Ok(table.render(format))
}

fn demo(format: Format) -> Outcome {
    let d = disc_exact(&fano(), &multipartite_h(7, 3)?)?;
    if d.min_overlap != d.max_overlap {
        return Err(invalid(format!(
            "overlap varies between {} and {}",
            d.min_overlap, d.max_overlap
        )));
    }
    Ok(match format {
        Format::Tsv => format!(
            "overlap = {} for all {} permutations; disc = {}\n",
            d.min_overlap, d.permutations, d.value
        ),
        Format::Json => {
            json!({
                "overlap": d.min_overlap,
                "permutations": d.permutations,
                "disc": format_rational(&d.value),
            })
            .to_string()
                + "\n"
        }
    })
}
