use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use super::alignment::Alignment;
use crate::error::{Error, Result};

/// Counting semaphore bounding concurrent matcher subprocesses.
#[derive(Debug)]
pub struct ProcessLimit {
    free: Mutex<usize>,
    cv: Condvar,
}

impl ProcessLimit {
    pub fn new(permits: usize) -> Arc<Self> {
        Arc::new(ProcessLimit { free: Mutex::new(permits.max(1)), cv: Condvar::new() })
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

struct Permit<'a>(&'a ProcessLimit);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// A one-to-one matcher run as `sh -c <template>` with `{A}`, `{B}` and
/// `{OUT}` replaced by the quoted input and output paths.
#[derive(Clone, Debug)]
pub struct ExternalMatcher {
    pub template: String,
    pub timeout: Option<Duration>,
    pub limit: Arc<ProcessLimit>,
}

impl ExternalMatcher {
    pub fn new(template: impl Into<String>) -> Result<Self> {
        let template = template.into();
        for p in ["{A}", "{B}", "{OUT}"] {
            if !template.contains(p) {
                return Err(Error::Config(format!("matcher command must contain {p}: {template:?}")));
            }
        }
        Ok(ExternalMatcher { template, timeout: None, limit: ProcessLimit::new(usize::MAX) })
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_limit(mut self, limit: Arc<ProcessLimit>) -> Self {
        self.limit = limit;
        self
    }

    pub fn command_line(&self, a: &Path, b: &Path, out: &Path) -> String {
        self.template
            .replace("{A}", &shell_quote(a))
            .replace("{B}", &shell_quote(b))
            .replace("{OUT}", &shell_quote(out))
    }

    pub fn run(&self, a: &Path, b: &Path, out: &Path) -> Result<Alignment> {
        run_external_matcher(self, a, b, out)
    }
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.to_string_lossy().replace('\'', r"'\''"))
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Runs the matcher and parses the alignment it writes to `out`.
pub fn run_external_matcher(m: &ExternalMatcher, a: &Path, b: &Path, out: &Path) -> Result<Alignment> {
    let _permit = m.limit.acquire();
    let line = m.command_line(a, b, out);
    log::debug!("running matcher: {line}");
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&line)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::ExternalMatcher(format!("cannot spawn `{line}`: {e}")))?;
    let stdout = drain(child.stdout.take().expect("piped stdout"));
    let stderr = drain(child.stderr.take().expect("piped stderr"));
    let start = Instant::now();
    let status = loop {
        match child.try_wait().map_err(|e| Error::ExternalMatcher(e.to_string()))? {
            Some(status) => break status,
            None => {
                if let Some(limit) = m.timeout {
                    if start.elapsed() >= limit {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Err(Error::MatcherTimeout(limit));
                    }
                }
                thread::sleep(Duration::from_millis(5));
            }
        }
    };
    let (stdout, stderr) = (stdout.join().unwrap_or_default(), stderr.join().unwrap_or_default());
    if !status.success() {
        let mut diag = stderr.trim().to_string();
        if diag.is_empty() {
            diag = stdout.trim().to_string();
        }
        return Err(Error::ExternalMatcher(format!("`{line}` exited with {status}: {diag}")));
    }
    if !out.exists() {
        return Err(Error::ExternalMatcher(format!("`{line}` produced no output file {}", out.display())));
    }
    Alignment::read(out)
}
