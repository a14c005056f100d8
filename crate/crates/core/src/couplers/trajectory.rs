use std::fmt::Write as _;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::structure::EngineKind;

/// Per-tick walker positions with block markers and provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub engine: EngineKind,
    pub seed: u64,
    /// SHA-256 of the host graph's canonical edge list.
    pub digest: String,
    walkers: usize,
    positions: Vec<VertexId>,
    blocks: Vec<usize>,
}

impl Trajectory {
    pub fn new(engine: EngineKind, seed: u64, digest: impl Into<String>, walkers: usize) -> Self {
        assert!(walkers > 0, "a trajectory needs at least one walker");
        Trajectory {
            engine,
            seed,
            digest: digest.into(),
            walkers,
            positions: Vec::new(),
            blocks: Vec::new(),
        }
    }

    pub fn walkers(&self) -> usize {
        self.walkers
    }

    /// Number of recorded ticks, counting `t = 0`.
    pub fn len(&self) -> usize {
        self.positions.len() / self.walkers
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn push(&mut self, positions: &[VertexId]) {
        assert_eq!(positions.len(), self.walkers, "wrong number of walkers");
        self.positions.extend_from_slice(positions);
    }

    /// Marks tick `t` as the start of a block.
    pub fn mark_block(&mut self, t: usize) {
        debug_assert!(self.blocks.last().is_none_or(|&last| last < t));
        self.blocks.push(t);
    }

    pub fn at(&self, t: usize) -> &[VertexId] {
        &self.positions[t * self.walkers..(t + 1) * self.walkers]
    }

    pub fn alice(&self, t: usize) -> VertexId {
        self.at(t)[0]
    }

    pub fn bob(&self, t: usize) -> VertexId {
        self.at(t)[1]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# graph-digest {}", self.digest)?;
        writeln!(w, "# seed {}", self.seed)?;
        writeln!(w, "# engine {}", self.engine)?;
        let mut blocks = self.blocks.iter().peekable();
        let mut line = String::new();
        for t in 0..self.len() {
            if blocks.next_if(|&&b| b == t).is_some() {
                writeln!(w, "# block {t}")?;
            }
            line.clear();
            let _ = write!(line, "{t}");
            for p in self.at(t) {
                let _ = write!(line, " {p}");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn parse(text: &str) -> Result<Trajectory> {
        let mut digest = None;
        let mut seed = None;
        let mut engine = None;
        let mut walkers = 0;
        let mut positions = Vec::new();
        let mut blocks: Vec<usize> = Vec::new();
        let mut ticks = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest.trim().split_once(' ').ok_or_else(|| err(format!("bad header '{line}'")))?;
                let value = value.trim();
                match key {
                    "graph-digest" => digest = Some(value.to_string()),
                    "seed" => seed = Some(value.parse::<u64>().map_err(|e| err(format!("seed: {e}")))?),
                    "engine" => engine = Some(value.parse::<EngineKind>().map_err(|e| err(e.to_string()))?),
                    "block" => {
                        let t = value.parse::<usize>().map_err(|e| err(format!("block: {e}")))?;
                        if t != ticks || blocks.last().is_some_and(|&b| b >= t) {
                            return Err(err(format!("block marker {t} out of place")));
                        }
                        blocks.push(t);
                    }
                    other => return Err(err(format!("unknown header '{other}'"))),
                }
                continue;
            }
            let mut fields = line.split_whitespace().map(|f| f.parse::<usize>());
            let t = fields
                .next()
                .expect("non-empty line")
                .map_err(|e| err(format!("tick: {e}")))?;
            if t != ticks {
                return Err(err(format!("expected tick {ticks}, found {t}")));
            }
            let row = fields
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| err(format!("position: {e}")))?;
            if walkers == 0 {
                walkers = row.len();
                if walkers == 0 {
                    return Err(err("tick line without positions".into()));
                }
            } else if row.len() != walkers {
                return Err(err(format!("expected {walkers} positions, found {}", row.len())));
            }
            positions.extend(row);
            ticks += 1;
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            message: format!("missing '# {what}' header"),
        };
        if ticks == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "trajectory has no ticks".into(),
            });
        }
        Ok(Trajectory {
            engine: engine.ok_or_else(|| missing("engine"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            digest: digest.ok_or_else(|| missing("graph-digest"))?,
            walkers,
            positions,
            blocks,
        })
    }
}
