//! Command-line front end. `run` takes the full argv and returns the process
//! exit status: 0 ok, 1 bad input, 2 resource limit or I/O, 3 a proven
//! inequality failed.

pub mod args;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use monkey_zipf::analysis::generalized_entropy;
use monkey_zipf::enumerate::{csiszar_bounds_with, rank_bounds_with};
use monkey_zipf::io::{self, sig17, KeyboardDoc, Provenance};
use monkey_zipf::keyboard::DEFAULT_LETTER_MASS;
use monkey_zipf::{
    convergence_sweep, figure1_data, fit_loglog_slope, keyboard_from_spacings, miller_keyboard,
    sample_spacings, shao_hahn_statistic, solve_root, top_n, verify_proposition1, CountingTable,
    DistributionSpec, Error, FigureKind, Keyboard, QuantileTable, Result, SpacingsSample,
};

use args::{Cli, Command, Format, GridArgs, KeyboardArgs, MassArgs, OutputArgs, SourceArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) => EXIT_VIOLATION,
        Error::Resource { .. }
        | Error::CountCap { .. }
        | Error::CountOverflow
        | Error::TruncationUnsafe { .. }
        | Error::Io(_) => EXIT_RESOURCE,
        Error::InvalidInput(_)
        | Error::DegenerateSample { .. }
        | Error::DegenerateFit(_)
        | Error::Json(_) => EXIT_INVALID,
    }
}

pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return code;
        }
    };
    let argv_tail = argv.into_iter().skip(1).collect();
    match dispatch(cli.command, argv_tail) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, argv: Vec<String>) -> Result<i32> {
    match command {
        Command::Sample { source, output } => cmd_sample(&source, &output, argv),
        Command::Exponent { keyboard, output } => {
            let (kb, prov) = resolve_keyboard(&keyboard, argv)?;
            let rep = solve_root(&kb)?;
            let text = match output.format {
                Format::Json => io::exponent_json(&rep, Some(&prov)),
                Format::Csv => csv(|w| io::write_exponent_csv(w, &rep, Some(&prov)))?,
            };
            emit(&output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Enumerate {
            keyboard,
            n,
            output,
        } => {
            let (kb, prov) = resolve_keyboard(&keyboard, argv)?;
            let ranked = top_n(&kb, n)?;
            let text = csv(|w| io::write_ranked_csv(w, &ranked, None))?;
            emit_table(&output, &prov, &text)?;
            Ok(EXIT_OK)
        }
        Command::Counts {
            keyboard,
            grid,
            output,
        } => {
            let (kb, prov) = resolve_keyboard(&keyboard, argv)?;
            counting_bounds(&kb, &grid, &prov, &output)
        }
        Command::Verify {
            check,
            keyboard,
            grid,
            n,
            output,
        } => {
            let (kb, prov) = resolve_keyboard(&keyboard, argv)?;
            if check.csiszar {
                counting_bounds(&kb, &grid, &prov, &output)
            } else if check.rankbounds {
                let rep = solve_root(&kb)?;
                let rows = rank_bounds_with(&rep, &top_n(&kb, n)?);
                let text = csv(|w| io::write_rank_checks_csv(w, &rows, None))?;
                emit_table(&output, &prov, &text)?;
                Ok(violations(
                    "rank bound",
                    rows.iter().filter(|r| !r.ok).count(),
                ))
            } else {
                let p = verify_proposition1(&kb)?;
                let text = csv(|w| io::write_prop1_csv(w, kb.k(), &p, None))?;
                emit_table(&output, &prov, &text)?;
                Ok(violations("mu_bar <= -beta", usize::from(!p.holds)))
            }
        }
        Command::Figure {
            kind,
            k,
            mass,
            seed,
            n,
            output,
        } => {
            let c = letter_mass(mass)?;
            let series = figure1_data(kind, k, c, n, seed)?;
            let prov = Provenance {
                argv,
                seed: (kind != FigureKind::EqualProbs).then_some(seed),
                spec: Some(kind.name().to_string()),
                c: Some(c),
            };
            let text = csv(|w| io::write_series_csv(w, &series, None))?;
            emit_table(&output, &prov, &text)?;
            if let Ok(fit) = fit_loglog_slope(&series, 2) {
                eprintln!(
                    "slope={} r_squared={}",
                    sig17(fit.slope),
                    sig17(fit.r_squared)
                );
            }
            Ok(EXIT_OK)
        }
        Command::Sweep {
            ks,
            seeds,
            spec,
            mass,
            seed,
            output,
        } => {
            let c = letter_mass(mass)?;
            let dist = parse_spec(&spec)?;
            let table = convergence_sweep(&dist, &ks, seeds, c, seed)?;
            let prov = Provenance {
                argv,
                seed: Some(seed),
                spec: Some(spec),
                c: Some(c),
            };
            let text = match output.format {
                Format::Csv => csv(|w| io::write_sweep_csv(w, &table, Some(&prov)))?,
                Format::Json => {
                    let body = csv(|w| io::write_sweep_csv(w, &table, None))?;
                    let medians = table
                        .medians
                        .iter()
                        .map(|(k, m)| format!("{{\"K\":{k},\"median_abs_err\":{}}}", sig17(*m)))
                        .collect::<Vec<_>>()
                        .join(",");
                    table_json(&body, &prov, &format!(",\"medians\":[{medians}]"))?
                }
            };
            emit(&output, &text)?;
            for (k, m) in &table.medians {
                eprintln!("K={k} median|beta-1|={}", sig17(*m));
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_sample(source: &SourceArgs, output: &OutputArgs, argv: Vec<String>) -> Result<i32> {
    let c = letter_mass(source.mass)?;
    let (sample, kb) = sampled_keyboard(source, c)?;
    let prov = Provenance {
        argv,
        seed: Some(source.seed),
        spec: Some(source.spec.clone()),
        c: Some(c),
    };
    let text = match output.format {
        Format::Json => io::keyboard_json(&kb, Some(&sample), Some(&prov)),
        Format::Csv => csv(|w| io::write_sample_csv(w, &sample, &kb, Some(&prov)))?,
    };
    emit(output, &text)?;

    let sh = shao_hahn_statistic(&sample).with_letter_mass(&sample, c);
    match generalized_entropy(&sample.spec) {
        Some(h) => eprintln!(
            "shao_hahn={} limit={}",
            sig17(sh.statistic),
            sig17(h - monkey_zipf::EULER_GAMMA)
        ),
        None => eprintln!("shao_hahn={}", sig17(sh.statistic)),
    }
    Ok(EXIT_OK)
}

fn counting_bounds(
    kb: &Keyboard,
    grid: &GridArgs,
    prov: &Provenance,
    output: &OutputArgs,
) -> Result<i32> {
    let ts = t_grid(grid)?;
    let rep = solve_root(kb)?;
    let table = CountingTable::build(kb, *ts.last().expect("grid starts at 0"))?;
    let checks = csiszar_bounds_with(&rep, &table, &ts)?;
    let rows = checks
        .into_iter()
        .map(|c| Ok((c, table.n_cum(c.t)?)))
        .collect::<Result<Vec<_>>>()?;
    let text = csv(|w| io::write_counts_csv(w, &rows, None))?;
    emit_table(output, prov, &text)?;
    Ok(violations(
        "counting bound",
        rows.iter().filter(|(c, _)| !c.ok).count(),
    ))
}

fn violations(what: &str, count: usize) -> i32 {
    if count == 0 {
        EXIT_OK
    } else {
        eprintln!("error: {count} {what} violation(s)");
        EXIT_VIOLATION
    }
}

/// `0, step, 2 step, ...` up to `tmax`.
pub fn t_grid(grid: &GridArgs) -> Result<Vec<f64>> {
    if !(grid.tstep > 0.0 && grid.tstep.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "--tstep {} must be positive",
            grid.tstep
        )));
    }
    if !(grid.tmax >= 0.0 && grid.tmax.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "--tmax {} must be non-negative",
            grid.tmax
        )));
    }
    let steps = (grid.tmax / grid.tstep + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| i as f64 * grid.tstep).collect())
}

fn letter_mass(mass: MassArgs) -> Result<f64> {
    let c = match (mass.c, mass.s) {
        (Some(c), None) => c,
        (None, Some(s)) => 1.0 - s,
        (None, None) => DEFAULT_LETTER_MASS,
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give only one of --c, --s".into())),
    };
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidInput(format!(
            "letter mass c={c} not in (0,1)"
        )));
    }
    Ok(c)
}

fn parse_spec(spec: &str) -> Result<DistributionSpec> {
    match spec.strip_prefix("table:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(DistributionSpec::QuantileTable(QuantileTable::parse_csv(
                &text,
            )?))
        }
        None => spec.parse(),
    }
}

fn sampled_keyboard(source: &SourceArgs, c: f64) -> Result<(SpacingsSample, Keyboard)> {
    let spec = parse_spec(&source.spec)?;
    let sample = sample_spacings(&spec, source.k, source.seed)?;
    let kb = keyboard_from_spacings(&sample, c)?;
    Ok((sample, kb))
}

fn resolve_keyboard(args: &KeyboardArgs, argv: Vec<String>) -> Result<(Keyboard, Provenance)> {
    let source = &args.source;
    if let Some(path) = &args.keyboard {
        let doc = KeyboardDoc::parse(&std::fs::read_to_string(path)?)?;
        let kb: Keyboard = doc.keyboard()?;
        let prov = Provenance {
            argv,
            seed: doc.seed,
            spec: doc.spec.as_ref().map(|s| s.name().to_string()),
            c: Some(kb.letter_mass()),
        };
        return Ok((kb, prov));
    }
    let c = letter_mass(source.mass)?;
    if args.miller {
        let kb = miller_keyboard(source.k, 1.0 - c)?;
        let prov = Provenance {
            argv,
            seed: None,
            spec: Some("equal".into()),
            c: Some(c),
        };
        return Ok((kb, prov));
    }
    let (_, kb) = sampled_keyboard(source, c)?;
    let prov = Provenance {
        argv,
        seed: Some(source.seed),
        spec: Some(source.spec.clone()),
        c: Some(c),
    };
    Ok((kb, prov))
}

fn csv(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("writers emit ASCII"))
}

/// Writes a table as CSV (provenance comment first) or as a JSON object
/// `{"provenance", "columns", "rows"}`.
fn emit_table(output: &OutputArgs, prov: &Provenance, body: &str) -> Result<()> {
    let text = match output.format {
        Format::Csv => format!("{}\n{body}", prov.comment_line()),
        Format::Json => table_json(body, prov, "")?,
    };
    emit(output, &text)
}

fn table_json(body: &str, prov: &Provenance, extra: &str) -> Result<String> {
    let mut lines = body.lines();
    let columns: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty table".into()))?
        .split(',')
        .collect();
    let mut out = format!(
        "{{\"provenance\":{},\"columns\":[{}],\"rows\":[",
        prov.to_json(),
        columns
            .iter()
            .map(|c| format!("\"{c}\""))
            .collect::<Vec<_>>()
            .join(",")
    );
    for (i, line) in lines.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let cells = line
            .split(',')
            .zip(&columns)
            .map(|(cell, &col)| json_cell(col, cell))
            .collect::<Vec<_>>();
        out.push('[');
        out.push_str(&cells.join(","));
        out.push(']');
    }
    out.push(']');
    out.push_str(extra);
    out.push_str("}\n");
    Ok(out)
}

fn json_cell(column: &str, cell: &str) -> String {
    if column == "word" {
        return format!("\"{cell}\"");
    }
    match cell {
        "true" | "false" => cell.to_string(),
        _ => match cell.parse::<f64>() {
            Ok(x) if x.is_finite() => cell.to_string(),
            _ => "null".to_string(),
        },
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
            Ok(())
        }
    }
}

/// Temp file in the target directory, then rename over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
