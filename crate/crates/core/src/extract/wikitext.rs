//! Just enough wikitext handling for infobox extraction: top-level template
//! scanning, parameter splitting and markup stripping. No template expansion.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfoboxInstance {
    pub template_name: String,
    pub pairs: Vec<(String, String)>,
}

/// Non-fatal problems found while scanning a page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateWarning {
    pub offset: usize,
    pub message: String,
}

/// A top-level `{{...}}` invocation; `body` excludes the outer braces.
#[derive(Clone, Debug, PartialEq, Eq)]
struct TemplateSpan<'a> {
    start: usize,
    end: usize,
    body: &'a str,
}

pub fn is_infobox_name(name: &str) -> bool {
    name.to_lowercase().contains("infobox")
}

pub fn extract_infoboxes(wikitext: &str) -> Vec<InfoboxInstance> {
    scan_infoboxes(wikitext).0
}

/// Like [`extract_infoboxes`], also returning brace-balance warnings.
pub fn scan_infoboxes(wikitext: &str) -> (Vec<InfoboxInstance>, Vec<TemplateWarning>) {
    let text = strip_comments(wikitext);
    let (spans, warnings) = top_level_templates(&text);
    let infoboxes = spans
        .into_iter()
        .filter_map(|span| {
            let mut parts = split_params(span.body).into_iter();
            let template_name = parts.next().unwrap_or_default().trim().to_string();
            if !is_infobox_name(&template_name) {
                return None;
            }
            let pairs = parts
                .filter_map(|part| {
                    let eq = find_top_level(part, '=')?;
                    let key = part[..eq].trim();
                    if key.is_empty() {
                        return None;
                    }
                    Some((key.to_string(), flatten_templates(&part[eq + 1..]).trim().to_string()))
                })
                .collect();
            Some(InfoboxInstance { template_name, pairs })
        })
        .collect();
    (infoboxes, warnings)
}

pub fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("<!--") {
        out.push_str(&rest[..start]);
        match rest[start + 4..].find("-->") {
            Some(end) => rest = &rest[start + 4 + end + 3..],
            None => return out,
        }
    }
    out.push_str(rest);
    out
}

fn top_level_templates(text: &str) -> (Vec<TemplateSpan<'_>>, Vec<TemplateWarning>) {
    let bytes = text.as_bytes();
    let mut spans = Vec::new();
    let mut warnings = Vec::new();
    let mut i = 0;
    while i + 1 < bytes.len() {
        if bytes[i] == b'{' && bytes[i + 1] == b'{' {
            let start = i;
            let mut depth = 0usize;
            let mut j = i;
            let mut closed = None;
            while j + 1 < bytes.len() {
                if bytes[j] == b'{' && bytes[j + 1] == b'{' {
                    depth += 1;
                    j += 2;
                } else if bytes[j] == b'}' && bytes[j + 1] == b'}' {
                    depth -= 1;
                    j += 2;
                    if depth == 0 {
                        closed = Some(j);
                        break;
                    }
                } else {
                    j += 1;
                }
            }
            match closed {
                Some(end) => {
                    spans.push(TemplateSpan { start, end, body: &text[start + 2..end - 2] });
                    i = end;
                }
                None => {
                    warnings.push(TemplateWarning {
                        offset: start,
                        message: format!("unbalanced braces: template opened at byte {start} never closes"),
                    });
                    spans.push(TemplateSpan { start, end: text.len(), body: &text[start + 2..] });
                    i = text.len();
                }
            }
        } else {
            i += 1;
        }
    }
    (spans, warnings)
}

/// Tracks `{{ }}` and `[[ ]]` nesting while walking a string.
fn walk_top_level(s: &str, mut visit: impl FnMut(usize, u8) -> bool) {
    let bytes = s.as_bytes();
    let (mut braces, mut brackets) = (0usize, 0usize);
    let mut i = 0;
    while i < bytes.len() {
        let pair = |c: u8| i + 1 < bytes.len() && bytes[i] == c && bytes[i + 1] == c;
        if pair(b'{') {
            braces += 1;
            i += 2;
        } else if pair(b'}') && braces > 0 {
            braces -= 1;
            i += 2;
        } else if pair(b'[') {
            brackets += 1;
            i += 2;
        } else if pair(b']') && brackets > 0 {
            brackets -= 1;
            i += 2;
        } else {
            if braces == 0 && brackets == 0 && !visit(i, bytes[i]) {
                return;
            }
            i += 1;
        }
    }
}

fn split_params(body: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut last = 0;
    walk_top_level(body, |i, b| {
        if b == b'|' {
            parts.push(&body[last..i]);
            last = i + 1;
        }
        true
    });
    parts.push(&body[last..]);
    parts
}

fn find_top_level(s: &str, needle: char) -> Option<usize> {
    let mut found = None;
    walk_top_level(s, |i, b| {
        if b == needle as u8 {
            found = Some(i);
            false
        } else {
            true
        }
    });
    found
}

/// Replaces every template in `s` by the text of its parameters (values of
/// named parameters, whole positional parameters) joined by spaces.
pub fn flatten_templates(s: &str) -> String {
    replace_templates(s, |body| {
        split_params(body)
            .into_iter()
            .skip(1)
            .map(|p| match find_top_level(p, '=') {
                Some(eq) => flatten_templates(&p[eq + 1..]),
                None => flatten_templates(p),
            })
            .map(|p| p.trim().to_string())
            .filter(|p| !p.is_empty())
            .collect::<Vec<_>>()
            .join(" ")
    })
}

pub fn remove_templates(s: &str) -> String {
    replace_templates(s, |_| String::new())
}

fn replace_templates(s: &str, mut f: impl FnMut(&str) -> String) -> String {
    let (spans, _) = top_level_templates(s);
    let mut out = String::with_capacity(s.len());
    let mut last = 0;
    for span in spans {
        out.push_str(&s[last..span.start]);
        out.push_str(&f(span.body));
        last = span.end;
    }
    out.push_str(&s[last..]);
    out
}

/// If `value` is exactly one internal link, returns its target.
pub fn sole_link_target(value: &str) -> Option<&str> {
    let inner = value.trim().strip_prefix("[[")?.strip_suffix("]]")?;
    if inner.contains("[[") || inner.contains("]]") {
        return None;
    }
    let target = inner.split('|').next()?;
    let target = target.split('#').next()?.trim().trim_start_matches(':').trim();
    (!target.is_empty()).then_some(target)
}

const NON_TEXT_NAMESPACES: [&str; 3] = ["file:", "image:", "category:"];

/// Reduces wikitext to plain text.
pub fn strip_markup(s: &str) -> String {
    let s = strip_comments(s);
    let s = strip_refs(&s);
    let s = flatten_templates(&s);
    let s = strip_links(&s);
    let s = strip_external_links(&s);
    let s = strip_tags(&s);
    let s = s.replace("'''", "").replace("''", "");
    let s = s
        .replace("&nbsp;", " ")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&amp;", "&");
    s.lines()
        .map(|line| line.trim_start().trim_start_matches(['*', '#', ':', ';']))
        .flat_map(str::split_whitespace)
        .collect::<Vec<_>>()
        .join(" ")
}

fn strip_refs(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = rest.find("<ref") {
        out.push_str(&rest[..start]);
        let after = &rest[start..];
        let Some(tag_end) = after.find('>') else {
            return out;
        };
        if after[..tag_end].ends_with('/') {
            rest = &after[tag_end + 1..];
            continue;
        }
        match after.find("</ref>") {
            Some(close) => rest = &after[close + 6..],
            None => rest = &after[tag_end + 1..],
        }
    }
    out.push_str(rest);
    out
}

fn strip_links(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = rest.find("[[") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        // find the matching close, allowing nested links (file captions)
        let mut depth = 1usize;
        let bytes = after.as_bytes();
        let mut i = 0;
        let mut end = None;
        while i + 1 < bytes.len() {
            if bytes[i] == b'[' && bytes[i + 1] == b'[' {
                depth += 1;
                i += 2;
            } else if bytes[i] == b']' && bytes[i + 1] == b']' {
                depth -= 1;
                if depth == 0 {
                    end = Some(i);
                    break;
                }
                i += 2;
            } else {
                i += 1;
            }
        }
        let Some(end) = end else {
            out.push_str(after);
            return out;
        };
        let inner = &after[..end];
        let lower = inner.trim_start().to_lowercase();
        if !NON_TEXT_NAMESPACES.iter().any(|ns| lower.starts_with(ns)) {
            let text = match inner.rfind('|') {
                Some(bar) => &inner[bar + 1..],
                None => inner.trim_start_matches(':'),
            };
            out.push_str(&strip_links(text));
        }
        rest = &after[end + 2..];
    }
    out.push_str(rest);
    out
}

fn strip_external_links(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = rest.find('[') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        let is_url = ["http://", "https://", "//"].iter().any(|p| after.starts_with(p));
        match after.find(']') {
            Some(end) if is_url => {
                if let Some(space) = after[..end].find(' ') {
                    out.push_str(&after[space + 1..end]);
                }
                rest = &after[end + 1..];
            }
            _ => {
                out.push('[');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

fn strip_tags(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = rest.find('<') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        let looks_like_tag = after.starts_with(|c: char| c.is_ascii_alphabetic() || c == '/');
        match after.find('>') {
            Some(end) if looks_like_tag => {
                out.push(' ');
                rest = &after[end + 1..];
            }
            _ => {
                out.push('<');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}

/// First paragraph before the first heading, with templates removed and
/// markup stripped.
pub fn first_paragraph(wikitext: &str) -> Option<String> {
    let text = remove_templates(&strip_comments(wikitext));
    let mut paragraph = String::new();
    for line in text.lines() {
        if line.trim_start().starts_with('=') {
            break;
        }
        if line.trim().is_empty() {
            if !strip_markup(&paragraph).is_empty() {
                break;
            }
            paragraph.clear();
            continue;
        }
        paragraph.push_str(line);
        paragraph.push('\n');
    }
    let stripped = strip_markup(&paragraph);
    (!stripped.is_empty()).then_some(stripped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn simple_infobox() {
        let boxes = extract_infoboxes("{{Infobox character|name=Betty Riker|species=Human}}");
        assert_eq!(
            boxes,
            vec![InfoboxInstance {
                template_name: "Infobox character".into(),
                pairs: pairs(&[("name", "Betty Riker"), ("species", "Human")]),
            }]
        );
    }

    #[test]
    fn no_templates() {
        assert!(extract_infoboxes("Just '''text''' with a [[link]].").is_empty());
    }

    #[test]
    fn nested_template_flattened() {
        let boxes = extract_infoboxes("{{Infobox person|spouse={{plainlist|[[A]]}}}}");
        assert_eq!(boxes[0].pairs, pairs(&[("spouse", "[[A]]")]));
    }

    #[test]
    fn positional_dropped_links_with_pipes_kept() {
        let text = "{{infobox Film\n| positional\n| director = [[Tony Scott|Scott]]\n| year=1986 <!-- c -->\n}}";
        let boxes = extract_infoboxes(text);
        assert_eq!(boxes[0].template_name, "infobox Film");
        assert_eq!(boxes[0].pairs, pairs(&[("director", "[[Tony Scott|Scott]]"), ("year", "1986")]));
    }

    #[test]
    fn only_infobox_templates_and_only_top_level() {
        let text = "{{Quote|x}} {{Character Infobox|a=1}} {{Nav|{{Infobox inner|b=2}}}}";
        let boxes = extract_infoboxes(text);
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].template_name, "Character Infobox");
    }

    #[test]
    fn unbalanced_braces_recover_with_warning() {
        let (boxes, warnings) = scan_infoboxes("{{Infobox character|name=X|born={{date|1990}");
        assert_eq!(warnings.len(), 1);
        assert_eq!(boxes.len(), 1);
        assert_eq!(boxes[0].pairs[0], ("name".to_string(), "X".to_string()));
    }

    #[test]
    fn sole_link() {
        assert_eq!(sole_link_target("[[Tom Cruise]]"), Some("Tom Cruise"));
        assert_eq!(sole_link_target(" [[Tom Cruise|the actor]] "), Some("Tom Cruise"));
        assert_eq!(sole_link_target("[[A#Early life|A]]"), Some("A"));
        assert_eq!(sole_link_target("[[A]] and [[B]]"), None);
        assert_eq!(sole_link_target("1.70 m"), None);
        assert_eq!(sole_link_target("[[|x]]"), None);
    }

    #[test]
    fn markup_stripping() {
        assert_eq!(strip_markup("'''Betty''' [[Riker family|Riker]]<ref>src</ref>"), "Betty Riker");
        assert_eq!(strip_markup("* [[A]]\n* [[B]]"), "A B");
        assert_eq!(strip_markup("[http://x.org Site] and [[File:a.png|thumb|cap]] 5<br/>6"), "Site and 5 6");
        assert_eq!(strip_markup("a &amp; b"), "a & b");
        assert_eq!(strip_markup("{{small|tiny}} text"), "tiny text");
        assert_eq!(strip_markup("x < y"), "x < y");
    }

    #[test]
    fn abstract_paragraph() {
        let text = "{{Infobox x|a=1}}\n[[File:f.png]]\n\n'''Betty Riker''' was the mother of [[William Riker]].\nShe died.\n\nSecond.\n== History ==\nMore.";
        assert_eq!(first_paragraph(text).as_deref(), Some("Betty Riker was the mother of William Riker. She died."));
        assert_eq!(first_paragraph("== H ==\ntext"), None);
    }
}
