//! The `icb` command: validate and generate from intention files, chat in
//! the terminal or over a transcript, and serve the HTTP session API.

pub mod script;

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use icb_core::dialogue::{start, step_with};
use icb_core::intent::IntentTable;
use icb_core::model::Platform;
use icb_core::{generate, parse, validate, DialogueState, GeneratedArtifact, IntentionModel, Severity};
use serde_json::json;

use script::{parse_script, Line};

pub const EXIT_OK: i32 = 0;
/// Validation errors, script mismatch or an unfinished conversation.
pub const EXIT_FAIL: i32 = 1;
/// Unreadable input, syntax errors, bad usage or unwritable output.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "icb", version, about = "Describe a smart contract in a conversation and generate its code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an intention file and print its issues.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate contract code from an intention file.
    Generate {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Overrides the platform named in the file.
        #[arg(long, value_parser = parse_platform)]
        platform: Option<Platform>,
        #[arg(long)]
        json: bool,
    },
    /// Talk to the bot on the terminal, or replay a transcript.
    Chat {
        /// Transcript of `U:` and `B:` lines to replay instead of stdin.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Where to write the generated files once the conversation is done.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Intent table replacing the shipped one.
        #[arg(long)]
        intents: Option<PathBuf>,
    },
    /// Run the HTTP session service (ICB_PORT, ICB_DATA_DIR, ICB_CORS_ORIGIN, ICB_STATIC_DIR).
    Serve,
}

fn parse_platform(s: &str) -> Result<Platform, String> {
    s.parse().map_err(|_| {
        let all: Vec<&str> = Platform::ALL.iter().map(|p| p.keyword()).collect();
        format!("unknown platform {s:?}; expected one of {}", all.join(", "))
    })
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { file, json } => cmd_validate(&file, json, out, err),
        Command::Generate { file, out: dir, platform, json } => cmd_generate(&file, &dir, platform, json, out, err),
        Command::Chat { script, out: dir, intents } => {
            cmd_chat(script.as_deref(), dir.as_deref(), intents.as_deref(), input, out, err)
        }
        Command::Serve => cmd_serve(err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "icb: output failed: {e}");
        EXIT_USAGE
    })
}

type Outcome = std::io::Result<i32>;

fn read_model(
    file: &Path,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<Result<IntentionModel, i32>> {
    let src = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "icb: cannot read {}: {e}", file.display())?;
            return Ok(Err(EXIT_USAGE));
        }
    };
    match parse(&src) {
        Ok(m) => Ok(Ok(m)),
        Err(errors) => {
            if json {
                writeln!(out, "{}", json!({ "file": file.display().to_string(), "syntaxErrors": errors }))?;
            }
            for e in &errors {
                writeln!(err, "{}:{e}", file.display())?;
            }
            Ok(Err(EXIT_USAGE))
        }
    }
}

fn cmd_validate(file: &Path, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let model = match read_model(file, json, out, err)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    let issues = validate(&model);
    let errors = issues.iter().filter(|i| i.severity == Severity::Error).count();
    if json {
        let body = json!({
            "file": file.display().to_string(),
            "syntaxErrors": [],
            "errors": errors,
            "warnings": issues.len() - errors,
            "issues": issues,
        });
        writeln!(out, "{body}")?;
    } else {
        for i in &issues {
            writeln!(out, "{i}")?;
        }
        writeln!(out, "{}: {errors} error(s), {} warning(s)", file.display(), issues.len() - errors)?;
    }
    Ok(if errors == 0 { EXIT_OK } else { EXIT_FAIL })
}

fn write_artifacts(dir: &Path, artifacts: &[GeneratedArtifact]) -> std::io::Result<()> {
    for a in artifacts {
        let path = dir.join(&a.rel_path);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, &a.content)?;
    }
    Ok(())
}

fn cmd_generate(
    file: &Path,
    dir: &Path,
    platform: Option<Platform>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let mut model = match read_model(file, json, out, err)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    if platform.is_some() {
        model.contract.platform = platform;
    }
    let issues = validate(&model);
    let errors: Vec<_> = issues.iter().filter(|i| i.severity == Severity::Error).collect();
    if !errors.is_empty() {
        if json {
            writeln!(out, "{}", json!({ "file": file.display().to_string(), "issues": issues, "files": [] }))?;
        }
        for e in &errors {
            writeln!(err, "{e}")?;
        }
        writeln!(err, "icb: {} error(s); nothing written", errors.len())?;
        return Ok(EXIT_FAIL);
    }
    let artifacts = generate(&model).expect("validated model generates");
    if let Err(e) = write_artifacts(dir, &artifacts) {
        writeln!(err, "icb: cannot write to {}: {e}", dir.display())?;
        return Ok(EXIT_USAGE);
    }
    let paths: Vec<&str> = artifacts.iter().map(|a| a.rel_path.as_str()).collect();
    if json {
        let keyword = model.contract.platform.map(|p| p.keyword());
        writeln!(
            out,
            "{}",
            json!({ "file": file.display().to_string(), "platform": keyword, "files": paths, "issues": issues })
        )?;
    } else {
        for p in paths {
            writeln!(out, "{p}")?;
        }
    }
    Ok(EXIT_OK)
}

fn print_turn(out: &mut dyn Write, prompt: &str, quick: Option<&Vec<String>>) -> std::io::Result<()> {
    writeln!(out, "bot> {prompt}")?;
    if let Some(q) = quick {
        writeln!(out, "     [{}]", q.join(" | "))?;
    }
    Ok(())
}

fn finish(state: &DialogueState, dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(artifacts) = state.artifacts() else {
        writeln!(err, "icb: conversation incomplete (stopped in {:?})", state.phase)?;
        return Ok(EXIT_FAIL);
    };
    if let Some(dir) = dir {
        if let Err(e) = write_artifacts(dir, &artifacts) {
            writeln!(err, "icb: cannot write to {}: {e}", dir.display())?;
            return Ok(EXIT_USAGE);
        }
        for a in &artifacts {
            writeln!(out, "wrote {}", dir.join(&a.rel_path).display())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_chat(
    script: Option<&Path>,
    dir: Option<&Path>,
    intents: Option<&Path>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let custom;
    let table = match intents {
        Some(path) => {
            let loaded = fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|s| s.parse::<IntentTable>().map_err(|e| e.to_string()));
            match loaded {
                Ok(t) => {
                    custom = t;
                    &custom
                }
                Err(e) => {
                    writeln!(err, "icb: bad intent table {}: {e}", path.display())?;
                    return Ok(EXIT_USAGE);
                }
            }
        }
        None => IntentTable::shipped(),
    };
    let (mut state, turn) = start();
    let mut last = turn.prompt.clone();

    let Some(path) = script else {
        print_turn(out, &turn.prompt, turn.quick_replies.as_ref())?;
        let mut line = String::new();
        while !state.is_done() {
            write!(out, "you> ")?;
            out.flush()?;
            line.clear();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                break;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (next, turn) = step_with(table, &state, line.trim());
            state = next;
            print_turn(out, &turn.prompt, turn.quick_replies.as_ref())?;
        }
        return finish(&state, dir, out, err);
    };

    let lines = match fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| parse_script(&s).map_err(|e| e.to_string()))
    {
        Ok(l) => l,
        Err(e) => {
            writeln!(err, "icb: cannot use script {}: {e}", path.display())?;
            return Ok(EXIT_USAGE);
        }
    };
    print_turn(out, &turn.prompt, turn.quick_replies.as_ref())?;
    for l in &lines {
        match &l.line {
            Line::User(text) => {
                if state.is_done() {
                    writeln!(err, "icb: {}:{}: conversation already finished", path.display(), l.number)?;
                    return Ok(EXIT_FAIL);
                }
                writeln!(out, "you> {text}")?;
                let (next, turn) = step_with(table, &state, text);
                state = next;
                last = turn.prompt.clone();
                print_turn(out, &turn.prompt, turn.quick_replies.as_ref())?;
            }
            Line::Bot(expected) => {
                if !last.starts_with(expected.as_str()) {
                    writeln!(err, "icb: {}:{}: bot reply differs", path.display(), l.number)?;
                    writeln!(err, "  expected: {expected}")?;
                    writeln!(err, "  actual:   {last}")?;
                    return Ok(EXIT_FAIL);
                }
            }
        }
    }
    finish(&state, dir, out, err)
}

fn cmd_serve(err: &mut dyn Write) -> Outcome {
    let config = match icb_service::Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "icb: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let runtime = tokio::runtime::Runtime::new()?;
    match runtime.block_on(icb_service::serve(config)) {
        Ok(()) => Ok(EXIT_OK),
        Err(e) => {
            writeln!(err, "icb: serve failed: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}
