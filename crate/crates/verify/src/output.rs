//! Report streams: aligned text or one JSON object per line.

use std::io::{self, Write};

use racah_core::report::{Method, ReportEntry, Skipped};
use serde_json::json;

use crate::config::OutputFormat;
use crate::suite::Summary;

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Symbolic => "symbolic",
        Method::Oracle => "oracle",
    }
}

pub fn entry_json(e: &ReportEntry) -> serde_json::Value {
    json!({
        "relation": e.relation.name(),
        "tuple": e.tuple,
        "method": method_name(e.method),
        "passed": e.passed,
        "residual_terms": e.residual_terms,
        "ms": e.ms,
    })
}

pub fn skipped_json(s: &Skipped) -> serde_json::Value {
    json!({ "relation": s.relation.name(), "skipped": true, "reason": s.reason })
}

pub fn summary_json(s: &Summary) -> serde_json::Value {
    json!({
        "summary": true,
        "n": s.n,
        "seed": s.seed,
        "total": s.total,
        "passed": s.passed,
        "failed": s.failed,
        "skipped": s.skipped,
    })
}

/// Single writer for the report stream.
pub struct Sink<W: Write> {
    format: OutputFormat,
    out: W,
}

impl<W: Write> Sink<W> {
    pub fn new(format: OutputFormat, out: W) -> Self {
        Sink { format, out }
    }

    pub fn section(&mut self, title: &str) -> io::Result<()> {
        if self.format == OutputFormat::Text {
            writeln!(self.out, "== {title}")?;
        }
        Ok(())
    }

    pub fn note(&mut self, text: &str) -> io::Result<()> {
        match self.format {
            OutputFormat::Text => writeln!(self.out, "   {text}"),
            OutputFormat::Json => writeln!(self.out, "{}", json!({ "note": text })),
        }
    }

    pub fn entry(&mut self, e: &ReportEntry) -> io::Result<()> {
        match self.format {
            OutputFormat::Text => {
                let tuple: Vec<String> = e.tuple.iter().map(|i| i.to_string()).collect();
                writeln!(
                    self.out,
                    "{} {:<26} ({}) {:<8} residual={} {:.3} ms",
                    if e.passed { "PASS" } else { "FAIL" },
                    e.relation.name(),
                    tuple.join(","),
                    method_name(e.method),
                    e.residual_terms,
                    e.ms
                )
            }
            OutputFormat::Json => writeln!(self.out, "{}", entry_json(e)),
        }
    }

    pub fn skipped(&mut self, s: &Skipped) -> io::Result<()> {
        match self.format {
            OutputFormat::Text => writeln!(self.out, "SKIP {:<26} {}", s.relation.name(), s.reason),
            OutputFormat::Json => writeln!(self.out, "{}", skipped_json(s)),
        }
    }

    pub fn summary(&mut self, s: &Summary) -> io::Result<()> {
        match self.format {
            OutputFormat::Text => writeln!(
                self.out,
                "total={} passed={} failed={} skipped={}",
                s.total, s.passed, s.failed, s.skipped
            ),
            OutputFormat::Json => writeln!(self.out, "{}", summary_json(s)),
        }?;
        self.out.flush()
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
