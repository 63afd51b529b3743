//! Presentation documents: one JSON object per file, tagged by `kind`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use symdyn::dyck::DyckSystem;
use symdyn::generators::{GeneratorSet, LoopSpec, Progression};
use symdyn::{Alphabet, Error, LabeledGraph, Language, Result, SftPresentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Document {
    Sft {
        alphabet: Vec<String>,
        #[serde(default)]
        forbidden: Vec<String>,
    },
    LabeledGraph {
        /// Defaults to the sorted set of edge labels.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
        vertices: usize,
        edges: Vec<(usize, usize, String)>,
    },
    LoopGraph {
        #[serde(default)]
        finite: Vec<u64>,
        /// (start, step) pairs: loops of every length start + k·step.
        #[serde(default)]
        progressions: Vec<(u64, u64)>,
    },
    Generators {
        alphabet: Vec<String>,
        alpha: String,
        returns: Vec<String>,
        horizon: usize,
        #[serde(default)]
        complete: bool,
    },
    Dyck {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forbidden: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Presentation {
    Sft(SftPresentation),
    LabeledGraph(LabeledGraph),
    LoopGraph(LoopSpec),
    Generators {
        alphabet: Alphabet,
        set: GeneratorSet,
        /// One labeled cycle per listed generator.
        graph: LabeledGraph,
    },
    Dyck(DyckSystem),
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{path}: {m}")),
        other => other,
    }
}

fn alphabet_at(path: &str, tokens: &[String]) -> Result<Alphabet> {
    Alphabet::new(tokens.iter().cloned()).map_err(|e| at(path, e))
}

fn word_at(ab: &Alphabet, path: &str, text: &str) -> Result<Word> {
    ab.parse_word(text).map_err(|e| at(path, e))
}

/// Parses and validates a document. Syntax errors carry line and column,
/// schema errors the path of the offending field.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let loc = format!("line {} column {}", inner.line(), inner.column());
        if path.is_empty() || path == "." {
            Error::Input(format!("{loc}: {inner}"))
        } else {
            Error::Input(format!("{path} ({loc}): {inner}"))
        }
    })?;
    from_document(&doc)
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|e| at(&path.display().to_string(), e))
}

pub fn from_document(doc: &Document) -> Result<Presentation> {
    match doc {
        Document::Sft {
            alphabet,
            forbidden,
        } => {
            let ab = alphabet_at("alphabet", alphabet)?;
            let words = forbidden
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let w = word_at(&ab, &format!("forbidden[{i}]"), f)?;
                    if w.is_empty() {
                        return Err(Error::Input(format!(
                            "forbidden[{i}]: empty forbidden word"
                        )));
                    }
                    Ok(w)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Presentation::Sft(SftPresentation::new(ab, words)?))
        }
        Document::LabeledGraph {
            alphabet,
            vertices,
            edges,
        } => {
            let ab = match alphabet {
                Some(tokens) => alphabet_at("alphabet", tokens)?,
                None => {
                    let labels: BTreeSet<&str> = edges.iter().map(|e| e.2.as_str()).collect();
                    if labels.is_empty() {
                        return Err(Error::Input("edges: graph has no edges".into()));
                    }
                    alphabet_at(
                        "edges",
                        &labels.into_iter().map(String::from).collect::<Vec<_>>(),
                    )?
                }
            };
            let mut parsed = Vec::with_capacity(edges.len());
            let mut has_out = vec![false; *vertices];
            let mut has_in = vec![false; *vertices];
            for (i, (u, v, label)) in edges.iter().enumerate() {
                for (j, x) in [(0, u), (1, v)] {
                    if *x >= *vertices {
                        return Err(Error::Input(format!(
                            "edges[{i}][{j}]: vertex {x} outside 0..{vertices}"
                        )));
                    }
                }
                let a = ab.symbol(label).ok_or_else(|| {
                    Error::Input(format!(
                        "edges[{i}][2]: label {label:?} is not in the alphabet"
                    ))
                })?;
                has_out[*u] = true;
                has_in[*v] = true;
                parsed.push((*u, *v, a));
            }
            for v in 0..*vertices {
                if !has_out[v] {
                    return Err(Error::Input(format!(
                        "edges: vertex {v} has no out-edge (not a shift presentation)"
                    )));
                }
                if !has_in[v] {
                    return Err(Error::Input(format!(
                        "edges: vertex {v} has no in-edge (not a shift presentation)"
                    )));
                }
            }
            let g = LabeledGraph::new(ab, *vertices, parsed)?;
            if g.live_vertices().is_empty() {
                return Err(Error::Input("edges: graph presents the empty shift".into()));
            }
            Ok(Presentation::LabeledGraph(g))
        }
        Document::LoopGraph {
            finite,
            progressions,
        } => {
            let progs = progressions
                .iter()
                .map(|&(start, step)| Progression { start, step })
                .collect();
            let spec = LoopSpec::new(finite.clone(), progs)?;
            if spec.is_empty() {
                return Err(Error::Input("finite: loop graph has no loops".into()));
            }
            Ok(Presentation::LoopGraph(spec))
        }
        Document::Generators {
            alphabet,
            alpha,
            returns,
            horizon,
            complete,
        } => {
            let ab = alphabet_at("alphabet", alphabet)?;
            let alpha = word_at(&ab, "alpha", alpha)?;
            let words = returns
                .iter()
                .enumerate()
                .map(|(i, r)| word_at(&ab, &format!("returns[{i}]"), r))
                .collect::<Result<Vec<_>>>()?;
            let set = GeneratorSet::from_list(alpha, words, *horizon, *complete)
                .map_err(|e| at("returns", e))?;
            if set.returns.is_empty() {
                return Err(Error::Input("returns: generator list is empty".into()));
            }
            let graph = set.to_labeled_graph(&ab)?;
            Ok(Presentation::Generators {
                alphabet: ab,
                set,
                graph,
            })
        }
        Document::Dyck { forbidden } => {
            let d = match forbidden {
                None => DyckSystem::unrestricted(),
                Some(f) => DyckSystem::with_forbidden(f).map_err(|e| at("forbidden", e))?,
            };
            Ok(Presentation::Dyck(d))
        }
    }
}

impl Presentation {
    /// Canonical document: explicit alphabets, pruned forbidden lists,
    /// sorted generator lists.
    pub fn to_document(&self) -> Document {
        match self {
            Presentation::Sft(p) => {
                let ab = p.alphabet();
                Document::Sft {
                    alphabet: ab.tokens().to_vec(),
                    forbidden: p.forbidden().iter().map(|w| ab.render(w)).collect(),
                }
            }
            Presentation::LabeledGraph(g) => {
                let ab = Language::alphabet(g);
                Document::LabeledGraph {
                    alphabet: Some(ab.tokens().to_vec()),
                    vertices: g.vertex_count(),
                    edges: g
                        .edges()
                        .iter()
                        .map(|&(u, v, a)| {
                            (u, v, ab.token(a).expect("label in alphabet").to_string())
                        })
                        .collect(),
                }
            }
            Presentation::LoopGraph(spec) => Document::LoopGraph {
                finite: spec.finite_lengths.clone(),
                progressions: spec
                    .progressions
                    .iter()
                    .map(|p| (p.start, p.step))
                    .collect(),
            },
            Presentation::Generators { alphabet, set, .. } => Document::Generators {
                alphabet: alphabet.tokens().to_vec(),
                alpha: alphabet.render(&set.alpha),
                returns: set.returns.iter().map(|w| alphabet.render(w)).collect(),
                horizon: set.horizon,
                complete: set.complete,
            },
            Presentation::Dyck(d) => Document::Dyck {
                forbidden: d.forbidden().map(|f| Language::alphabet(d).render(f)),
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Presentation::Sft(_) => "sft",
            Presentation::LabeledGraph(_) => "labeled_graph",
            Presentation::LoopGraph(_) => "loop_graph",
            Presentation::Generators { .. } => "generators",
            Presentation::Dyck(_) => "dyck",
        }
    }

    /// Membership oracle; loop graphs are unlabeled and have none.
    pub fn language(&self) -> Option<&dyn Language> {
        match self {
            Presentation::Sft(p) => Some(p),
            Presentation::LabeledGraph(g) => Some(g),
            Presentation::Generators { graph, .. } => Some(graph),
            Presentation::Dyck(d) => Some(d),
            Presentation::LoopGraph(_) => None,
        }
    }

    pub fn require_language(&self) -> Result<&dyn Language> {
        self.language().ok_or_else(|| {
            Error::Precondition(format!(
                "a {} presentation has no symbolic language",
                self.kind()
            ))
        })
    }

    /// Finite labeled-graph presentation, when the shift is sofic.
    pub fn graph(&self) -> Option<LabeledGraph> {
        self.language().and_then(|l| l.presentation())
    }

    pub fn require_graph(&self) -> Result<LabeledGraph> {
        self.graph().ok_or_else(|| {
            Error::Precondition(format!(
                "a {} presentation has no finite labeled graph",
                self.kind()
            ))
        })
    }

    /// Loop lengths, for loop graphs and generator sets with a certified
    /// or complete length description.
    pub fn loop_spec(&self) -> Result<LoopSpec> {
        match self {
            Presentation::LoopGraph(spec) => Ok(spec.clone()),
            Presentation::Generators { set, .. } => set.structure.clone().ok_or_else(|| {
                Error::Precondition(
                    "generator list is not complete; its loop lengths are unknown".into(),
                )
            }),
            other => Err(Error::Precondition(format!(
                "a {} presentation does not describe a loop graph",
                other.kind()
            ))),
        }
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        self.language().map(|l| l.alphabet())
    }
}

/// Canonical JSON text of a presentation.
pub fn emit_presentation(p: &Presentation) -> String {
    serde_json::to_string_pretty(&p.to_document()).expect("documents serialize")
}
