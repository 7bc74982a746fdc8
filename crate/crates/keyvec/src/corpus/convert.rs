//! Converters from raw dataset layouts into the JSONL corpus format.
//!
//! Krapivin: each article is a `.txt` file with `--T`, `--A`, `--B` marker
//! lines introducing title, abstract, and body, plus a sibling `.key` file
//! with one gold keyphrase per line.
//!
//! Semeval: each article is a plain `.txt` export. The split heuristic is
//! documented on `split_semeval`; gold keyphrases come from one combined
//! answer file with lines "docid : phrase,phrase,...".

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

/// Parses the Krapivin marker format into (title, abstract, body). Markers
/// must appear on their own lines; text between markers belongs to the
/// preceding marker. Unknown markers end the current section and their
/// content is ignored.
pub fn parse_krapivin(text: &str) -> Result<(String, String, String)> {
    enum Section {
        None,
        Title,
        Abstract,
        Body,
    }
    let mut title = String::new();
    let mut abstract_text = String::new();
    let mut body = String::new();
    let mut section = Section::None;
    for line in text.lines() {
        match line.trim() {
            "--T" => section = Section::Title,
            "--A" => section = Section::Abstract,
            "--B" => section = Section::Body,
            t if t.starts_with("--") && t.len() == 3 => section = Section::None,
            _ => {
                let target = match section {
                    Section::Title => &mut title,
                    Section::Abstract => &mut abstract_text,
                    Section::Body => &mut body,
                    Section::None => continue,
                };
                if !target.is_empty() {
                    target.push('\n');
                }
                target.push_str(line);
            }
        }
    }
    if title.trim().is_empty() && abstract_text.trim().is_empty() {
        return Err(Error::InvalidConfig(
            "no --T or --A section found in marker file".into(),
        ));
    }
    Ok((
        title.trim().to_string(),
        abstract_text.trim().to_string(),
        body.trim().to_string(),
    ))
}

/// Parses a `.key` gold file: one keyphrase per line, blanks ignored.
pub fn parse_key_file(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

/// Converts a directory of Krapivin `.txt`/`.key` pairs. Files are visited
/// in sorted name order; document ids are the file stems. A missing `.key`
/// yields an empty gold list with a warning.
pub fn convert_krapivin(dir: &Path) -> Result<Corpus> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();

    let mut documents = Vec::new();
    for path in paths {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let (title, abstract_text, body) = parse_krapivin(&text)
            .map_err(|e| Error::Document { id: id.clone(), msg: e.to_string() })?;

        let key_path = path.with_extension("key");
        let gold = match fs::read_to_string(&key_path) {
            Ok(keys) => parse_key_file(&keys),
            Err(_) => {
                log::warn!("{id}: no .key file, emitting empty gold list");
                Vec::new()
            }
        };

        documents.push(Document {
            id,
            title,
            abstract_text,
            fulltext: body,
            gold,
        });
    }
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "krapivin".into());
    Corpus::from_documents(name, documents)
}

/// Splits a raw Semeval article into (title, abstract, body).
///
/// Heuristic, in document order:
/// - the title is the first non-empty line;
/// - a line that is just the word "abstract" (ignoring case and
///   punctuation) is a section header and is dropped;
/// - the body starts at the first heading line that introduces the
///   introduction section: at most 5 whitespace-separated words, one of
///   which starts with "introduct" once non-alphabetic characters are
///   stripped (this accepts "1. Introduction", "INTRODUCTION", etc.);
/// - everything between title and that heading is the abstract; if no such
///   heading exists the whole remainder is the abstract and the body is
///   empty.
pub fn split_semeval(text: &str) -> (String, String, String) {
    let mut lines = text.lines();
    let mut title = String::new();
    for line in lines.by_ref() {
        if !line.trim().is_empty() {
            title = line.trim().to_string();
            break;
        }
    }

    let rest: Vec<&str> = lines.collect();
    let mut abstract_lines: Vec<&str> = Vec::new();
    let mut body_lines: Vec<&str> = Vec::new();
    let mut in_body = false;
    for line in rest {
        if in_body {
            body_lines.push(line);
            continue;
        }
        if is_intro_heading(line) {
            in_body = true;
            body_lines.push(line);
        } else if !is_abstract_header(line) {
            abstract_lines.push(line);
        }
    }
    (
        title,
        abstract_lines.join("\n").trim().to_string(),
        body_lines.join("\n").trim().to_string(),
    )
}

fn alpha_only(word: &str) -> String {
    word.chars()
        .filter(|c| c.is_alphabetic())
        .collect::<String>()
        .to_lowercase()
}

fn is_intro_heading(line: &str) -> bool {
    let words: Vec<&str> = line.split_whitespace().collect();
    !words.is_empty()
        && words.len() <= 5
        && words.iter().any(|w| alpha_only(w).starts_with("introduct"))
}

fn is_abstract_header(line: &str) -> bool {
    let words: Vec<&str> = line.split_whitespace().collect();
    words.len() == 1 && alpha_only(words[0]) == "abstract"
}

/// Parses a combined answer file: lines of "docid : phrase,phrase". A "+"
/// inside a phrase separates alternate forms; each alternate becomes its
/// own gold phrase.
pub fn parse_answer_file(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, phrases) = line.split_once(':').ok_or_else(|| {
            Error::parse(path, lineno + 1, "expected \"docid : phrases\"")
        })?;
        let id = id.trim().to_string();
        if id.is_empty() {
            return Err(Error::parse(path, lineno + 1, "empty document id"));
        }
        let gold: Vec<String> = phrases
            .split(',')
            .flat_map(|p| p.split('+'))
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::to_string)
            .collect();
        if map.insert(id.clone(), gold).is_some() {
            return Err(Error::DuplicateId(id));
        }
    }
    Ok(map)
}

/// Converts a directory of Semeval `.txt` articles plus a combined answer
/// file. Document ids are the file stems; answers without a matching file
/// and files without answers are warned about.
pub fn convert_semeval(dir: &Path, answers: &Path) -> Result<Corpus> {
    let mut gold_map = parse_answer_file(answers)?;
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();

    let mut documents = Vec::new();
    for path in paths {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let (title, abstract_text, body) = split_semeval(&text);
        let gold = gold_map.remove(&id).unwrap_or_else(|| {
            log::warn!("{id}: no entry in answer file, emitting empty gold list");
            Vec::new()
        });
        documents.push(Document {
            id,
            title,
            abstract_text,
            fulltext: body,
            gold,
        });
    }
    for id in gold_map.keys() {
        log::warn!("answer file names {id} but no such document file exists");
    }
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "semeval".into());
    Corpus::from_documents(name, documents)
}
