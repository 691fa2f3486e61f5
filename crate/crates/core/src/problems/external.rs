//! Line-oriented black-box protocol over a child process.
//!
//! Request: the `n` physical coordinates as decimals separated by single
//! spaces, one newline, flushed. Response: one decimal on one line.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;

use super::Evaluator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalCommand {
    pub program: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
}

fn default_timeout_ms() -> u64 {
    60_000
}

impl ExternalCommand {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        ExternalCommand {
            program: program.into(),
            args,
            timeout_ms: default_timeout_ms(),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout_ms = timeout.as_millis() as u64;
        self
    }
}

pub struct ExternalEvaluator {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
}

impl ExternalEvaluator {
    pub fn spawn(cmd: &ExternalCommand) -> Result<Self, EvalError> {
        let mut child = Command::new(&cmd.program)
            .args(&cmd.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take();
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalEvaluator {
            child,
            stdin,
            lines: rx,
            timeout: Duration::from_millis(cmd.timeout_ms),
        })
    }
}

/// Formats one request line (without the newline).
pub fn format_request(x: &[f64]) -> String {
    x.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses one response line; anything but a single finite decimal is rejected.
pub fn parse_response(request: &str, line: &str) -> Result<f64, EvalError> {
    let protocol = || EvalError::Protocol {
        request: request.to_string(),
        line: line.to_string(),
    };
    let v: f64 = line.trim().parse().map_err(|_| protocol())?;
    if !v.is_finite() {
        return Err(protocol());
    }
    Ok(v)
}

impl Evaluator for ExternalEvaluator {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        let request = format_request(x);
        let exited = || EvalError::Exited {
            request: request.clone(),
        };
        let stdin = self.stdin.as_mut().ok_or_else(exited)?;
        if stdin
            .write_all(request.as_bytes())
            .and_then(|_| stdin.write_all(b"\n"))
            .and_then(|_| stdin.flush())
            .is_err()
        {
            return Err(exited());
        }
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => parse_response(&request, &line),
            Ok(Err(e)) => Err(EvalError::Io(e)),
            Err(RecvTimeoutError::Timeout) => Err(EvalError::Timeout {
                request,
                millis: self.timeout.as_millis(),
            }),
            Err(RecvTimeoutError::Disconnected) => Err(exited()),
        }
    }
}

impl Drop for ExternalEvaluator {
    fn drop(&mut self) {
        // closing stdin lets well-behaved children exit on their own
        self.stdin.take();
        if !matches!(self.child.try_wait(), Ok(Some(_))) {
            let _ = self.child.kill();
        }
        let _ = self.child.wait();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_is_space_separated_decimals() {
        assert_eq!(format_request(&[0.5, -2.0, 1e-7]), "0.5 -2 0.0000001");
    }

    #[test]
    fn response_parsing() {
        assert_eq!(parse_response("0", "0.0").unwrap(), 0.0);
        assert_eq!(parse_response("0", "-1.25\r").unwrap(), -1.25);
        assert!(parse_response("0", "nan").is_err());
        assert!(parse_response("0", "inf").is_err());
        assert!(parse_response("0", "1.0 2.0").is_err());
        assert!(parse_response("0", "ok").is_err());
    }
}
