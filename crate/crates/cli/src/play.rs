//! Line-oriented game where a human plays the adversary.
//!
//! Each round shows the configuration, asks for a generator index, applies
//! that permutation and then the strategy's next move. The session ends when
//! the counters reach zero or the strategy runs out.

use std::io::{BufRead, Write};

use blindfold_core::{act, ModVector, Strategy, Trace};

use crate::error::CliError;

fn fmt_vec(v: &ModVector) -> String {
    let parts: Vec<String> = v.entries().iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn read_line(input: &mut impl BufRead) -> Result<String, CliError> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Err(CliError::Usage("unexpected end of input".into()));
    }
    Ok(line.trim().to_owned())
}

/// Parses residues separated by commas and/or whitespace, optionally in brackets.
pub fn parse_config(text: &str, n: usize, m: u64) -> Result<ModVector, CliError> {
    let cleaned: String = text
        .chars()
        .map(|c| if "[](),".contains(c) { ' ' } else { c })
        .collect();
    let values = cleaned
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| CliError::Usage(format!("not a residue: {t}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != n {
        return Err(CliError::Usage(format!("expected {n} residues, got {}", values.len())));
    }
    Ok(ModVector::new(m, values)?)
}

/// Runs a session. `start` skips the start prompt. Invalid answers are
/// re-prompted; end of input is an error.
pub fn play(
    strategy: &Strategy,
    start: Option<ModVector>,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> Result<Trace, CliError> {
    let spec = strategy.spec();
    let perms = spec.gens().perms();
    writeln!(out, "{} counters mod {}, {} moves", spec.n(), spec.m(), strategy.len())?;
    for (i, g) in perms.iter().enumerate() {
        writeln!(out, "  [{i}] {:?}", g.images())?;
    }
    let mut x = match start {
        Some(x) => x,
        None => loop {
            write!(out, "start configuration> ")?;
            out.flush()?;
            match parse_config(&read_line(input)?, spec.n(), spec.m()) {
                Ok(x) => break x,
                Err(e) => writeln!(out, "{e}")?,
            }
        },
    };
    let mut configs = vec![x.clone()];
    if x.is_zero() {
        writeln!(out, "start {} is already zero: player wins", fmt_vec(&x))?;
        return Ok(Trace { configs, won_at: Some(0) });
    }
    for (k, y) in strategy.moves().iter().enumerate() {
        writeln!(out, "round {}/{}: {}", k + 1, strategy.len(), fmt_vec(&x))?;
        let gi = loop {
            write!(out, "generator index [0-{}]> ", perms.len() - 1)?;
            out.flush()?;
            match read_line(input)?.parse::<usize>() {
                Ok(i) if i < perms.len() => break i,
                _ => writeln!(out, "enter an index between 0 and {}", perms.len() - 1)?,
            }
        };
        x = act(&perms[gi], &x)?.add(y)?;
        writeln!(out, "move {} -> {}", fmt_vec(y), fmt_vec(&x))?;
        configs.push(x.clone());
        if x.is_zero() {
            writeln!(out, "all counters zero after move {}: player wins", k + 1)?;
            return Ok(Trace { configs, won_at: Some(k + 1) });
        }
    }
    writeln!(out, "strategy exhausted at {}: adversary survives", fmt_vec(&x))?;
    Ok(Trace { configs, won_at: None })
}
