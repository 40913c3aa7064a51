use scraper::{ElementRef, Html, Node, Selector};

use super::FetchError;

/// Classes whose subtrees are left out of the statement text: the title and
/// limits header, the sample tests, and the section captions.
const EXCLUDED_CLASSES: [&str; 3] = ["header", "sample-tests", "section-title"];

const BLOCK_TAGS: [&str; 14] =
    ["p", "div", "li", "ul", "ol", "br", "h1", "h2", "h3", "h4", "pre", "table", "tr", "td"];

/// Plain text of the `div.problem-statement` region: markup stripped, math
/// spans replaced by a space, whitespace collapsed. `id` only labels errors.
pub fn extract_statement_text(html: &str, id: &str) -> Result<String, FetchError> {
    let err = |message: &str| FetchError::Extract { id: id.to_string(), message: message.to_string() };
    let document = Html::parse_document(html);
    let selector = Selector::parse("div.problem-statement").expect("static selector");
    let region = document.select(&selector).next().ok_or_else(|| err("statement region not found"))?;
    let mut raw = String::new();
    collect_text(region, &mut raw);
    let text = collapse_whitespace(&strip_math(&raw));
    if text.is_empty() {
        return Err(err("statement region is empty"));
    }
    Ok(text)
}

fn collect_text(element: ElementRef, out: &mut String) {
    for child in element.children() {
        match child.value() {
            Node::Text(t) => out.push_str(t),
            Node::Element(e) => {
                if matches!(e.name(), "script" | "style") || e.classes().any(|c| EXCLUDED_CLASSES.contains(&c)) {
                    continue;
                }
                let block = BLOCK_TAGS.contains(&e.name());
                if block {
                    out.push(' ');
                }
                if let Some(el) = ElementRef::wrap(child) {
                    collect_text(el, out);
                }
                if block {
                    out.push(' ');
                }
            }
            _ => {}
        }
    }
}

/// Replaces each span delimited by matching runs of `$` (`$..$`, `$$..$$`,
/// and the provider's `$$$..$$$`) with a single space. An unmatched run is
/// kept as literal text.
pub fn strip_math(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let run_at = |i: usize| chars[i..].iter().take_while(|&&c| c == '$').count();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '$' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let open = run_at(i);
        let mut j = i + open;
        let mut close = None;
        while j < chars.len() {
            if chars[j] == '$' {
                let run = run_at(j);
                if run == open {
                    close = Some(j + run);
                    break;
                }
                j += run;
            } else {
                j += 1;
            }
        }
        match close {
            Some(end) => {
                out.push(' ');
                i = end;
            }
            None => {
                out.extend(&chars[i..i + open]);
                i += open;
            }
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
