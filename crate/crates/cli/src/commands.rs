use std::io::{ErrorKind, Read, Write};
use std::path::{Path, PathBuf};

use palmcheck::axb::AxbConfig;
use palmcheck::instance::{build, generate, mutate, standard, Instance, InstanceFile, InstanceSpec, Limits, Mutation};
use palmcheck::measure::find_symmetric_sets;
use palmcheck::rational::format_rational;
use palmcheck::report::{CheckReport, Status};
use palmcheck::suite::{run_suite, Suite, SuiteOptions};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;
use crate::{Format, GlobalOpts, Source};

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::json(path, &e))
}

fn load(source: &Source) -> Result<InstanceFile, CliError> {
    let file = match (&source.instance, source.seed) {
        (Some(path), _) => parse_json(path, &read_text(path)?)?,
        (None, Some(seed)) => generate(&standard(seed))?,
        (None, None) => return Err(CliError::Usage("give an instance file, `-` for stdin, or --seed".into())),
    };
    match source.mutation {
        Some(m) => Ok(mutate(&file, m)?),
        None => Ok(file),
    }
}

fn load_built(g: &GlobalOpts, source: &Source) -> Result<Instance, CliError> {
    let limits = Limits { max_group_order: g.max_group_order, ..Limits::default() };
    Ok(build(&load(source)?, &limits)?)
}

macro_rules! outln {
    ($buf:expr, $($arg:tt)*) => {{
        $buf.push_str(&format!($($arg)*));
        $buf.push('\n');
    }};
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

pub fn orbits(g: &GlobalOpts, source: &Source, sets: usize) -> Result<bool, CliError> {
    let inst = load_built(g, source)?;
    let a = &inst.action;
    let orbits: Vec<_> = a
        .orbits()
        .representatives
        .iter()
        .map(|&b| json!({ "representative": b, "members": a.orbits().members(b), "stabilizer_order": a.stabilizer_order(b) }))
        .collect();
    let delta: Vec<String> = (0..a.points()).map(|s| format_rational(&a.delta_star(s))).collect();
    let symmetric = find_symmetric_sets(a, sets);
    let mut buf = String::new();
    match g.format {
        Format::Json => buf.push_str(&pretty(&json!({
            "instance": inst.file.name,
            "digest": inst.digest,
            "group": a.group().label(),
            "order": a.group().order(),
            "points": a.points(),
            "orbits": orbits,
            "delta_star": delta,
            "symmetric_sets": symmetric,
        }))),
        Format::Text => {
            outln!(buf, "{} ({}), |G| = {}, |S| = {}", inst.file.name, a.group().label(), a.group().order(), a.points());
            for &b in &a.orbits().representatives {
                outln!(buf, "orbit of {b}: {:?} (stabilizer order {})", a.orbits().members(b), a.stabilizer_order(b));
            }
            outln!(buf, "delta*: {}", delta.join(" "));
            for set in &symmetric {
                outln!(buf, "symmetric set: {set:?}");
            }
        }
    }
    emit(&buf)?;
    Ok(true)
}

pub fn kernel(g: &GlobalOpts, source: &Source) -> Result<bool, CliError> {
    let inst = load_built(g, source)?;
    let a = &inst.action;
    let kappa = a.kappa();
    let n = a.points();
    let cells: Vec<_> = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .filter(|&(s, t)| !kappa.support(s, t).is_empty())
        .collect();
    let mut buf = String::new();
    match g.format {
        Format::Json => {
            let rows: Vec<_> = cells
                .iter()
                .map(|&(s, t)| {
                    json!({ "s": s, "t": t, "atom": format_rational(&kappa.atom(s)), "support": kappa.support(s, t) })
                })
                .collect();
            let elements: Vec<_> = a.group().elements().iter().map(|p| p.images().to_vec()).collect();
            buf.push_str(&pretty(&json!({ "instance": inst.file.name, "digest": inst.digest, "elements": elements, "kernel": rows })));
        }
        Format::Text => {
            for (s, t) in cells {
                outln!(buf, "kappa[{s},{t}] = {} on {:?}", format_rational(&kappa.atom(s)), kappa.support(s, t));
            }
        }
    }
    emit(&buf)?;
    Ok(true)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub precondition_failed: usize,
}

impl Summary {
    fn of<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> Self {
        let mut s = Summary::default();
        for r in reports {
            s.total += 1;
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::PreconditionFailed => s.precondition_failed += 1,
            }
        }
        s
    }

    fn all_pass(&self) -> bool {
        self.pass == self.total
    }
}

/// What `check` writes, and what `report` reads back.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutput {
    pub instance: String,
    pub digest: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
    pub suite: Suite,
    pub summary: Summary,
    pub reports: Vec<CheckReport>,
}

fn suite_options(g: &GlobalOpts) -> SuiteOptions {
    let axb = AxbConfig { order: g.axb_order, window: g.axb_window, tolerance: g.tolerance, ..AxbConfig::default() };
    SuiteOptions { axb, ..SuiteOptions::default() }
}

pub fn check(g: &GlobalOpts, source: &Source, suite: Suite, out: Option<&Path>) -> Result<bool, CliError> {
    let inst = load_built(g, source)?;
    let reports = run_suite(&inst, suite, &suite_options(g))?;
    let output = CheckOutput {
        instance: inst.file.name.clone(),
        digest: inst.digest.clone(),
        seed: inst.file.seed,
        mutation: inst.file.mutation,
        suite,
        summary: Summary::of(&reports),
        reports,
    };
    if let Some(path) = out {
        write_text(path, &(serde_json::to_string_pretty(&output).expect("output serializes") + "\n"))?;
    }
    let mut buf = String::new();
    match g.format {
        Format::Json => buf.push_str(&pretty(&output)),
        Format::Text => {
            for r in &output.reports {
                outln!(buf, "{}", r.summary_line());
            }
            let s = output.summary;
            outln!(buf, 
                "{} [{}] suite {}: {} checks, {} pass, {} fail, {} precondition-failed",
                output.instance, output.digest, suite, s.total, s.pass, s.fail, s.precondition_failed
            );
        }
    }
    emit(&buf)?;
    Ok(output.summary.all_pass())
}

pub fn gen(
    seed: u64,
    count: u64,
    spec: Option<&Path>,
    mutation: Option<Mutation>,
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let mut files = Vec::new();
    match spec {
        Some(path) => {
            let spec: InstanceSpec = parse_json(path, &read_text(path)?)?;
            files.push(generate(&spec)?);
        }
        None => {
            for s in seed..seed.saturating_add(count) {
                files.push(generate(&standard(s))?);
            }
        }
    }
    if let Some(m) = mutation {
        files = files.iter().map(|f| mutate(f, m)).collect::<Result<_, _>>()?;
    }
    match (out, files.as_slice()) {
        (None, [one]) => emit(&one.to_json())?,
        (None, _) => return Err(CliError::Usage("several instances need --out DIR".into())),
        (Some(path), [one]) if !path.is_dir() => write_text(path, &one.to_json())?,
        (Some(dir), many) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
            for f in many {
                write_text(&dir.join(format!("{}.json", f.name)), &f.to_json())?;
            }
        }
    }
    Ok(true)
}

pub fn report(g: &GlobalOpts, files: &[PathBuf]) -> Result<bool, CliError> {
    let mut outputs: Vec<CheckOutput> = Vec::new();
    for path in files {
        outputs.push(parse_json(path, &read_text(path)?)?);
    }
    let mut reports: Vec<&CheckReport> = outputs.iter().flat_map(|o| &o.reports).collect();
    reports.sort_by(|x, y| (&x.check_name, &x.instance_digest).cmp(&(&y.check_name, &y.instance_digest)));
    let summary = Summary::of(reports.iter().copied());
    let failures: Vec<&CheckReport> = reports.iter().copied().filter(|r| !r.is_pass()).collect();
    let mut buf = String::new();
    match g.format {
        Format::Json => buf.push_str(&pretty(&json!({
            "instances": outputs.iter().map(|o| json!({ "instance": o.instance, "digest": o.digest, "summary": o.summary })).collect::<Vec<_>>(),
            "summary": summary,
            "failures": failures,
        }))),
        Format::Text => {
            for o in &outputs {
                let s = o.summary;
                outln!(buf, "{} [{}]: {}/{} pass", o.instance, o.digest, s.pass, s.total);
            }
            for r in &failures {
                outln!(buf, "{} ({})", r.summary_line(), r.instance_digest.as_deref().unwrap_or("-"));
            }
            outln!(buf, 
                "{} instances, {} checks, {} pass, {} fail, {} precondition-failed",
                outputs.len(),
                summary.total,
                summary.pass,
                summary.fail,
                summary.precondition_failed
            );
        }
    }
    emit(&buf)?;
    Ok(summary.all_pass())
}
