use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use super::{IngestError, RawPost, PAGE_SIZE};

/// Loads every record from an archive-response fixture, unfiltered.
pub fn load_posts_fixture(path: impl AsRef<Path>) -> Result<Vec<RawPost>, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode_pages(&text)
}

/// Decodes one or more concatenated `{"data": [...]}` response objects.
///
/// Record indices in errors count across all pages.
pub fn decode_pages(text: &str) -> Result<Vec<RawPost>, IngestError> {
    let mut posts = Vec::new();
    for page in serde_json::Deserializer::from_str(text).into_iter::<Value>() {
        let page = page.map_err(|e| IngestError::Decode {
            index: None,
            message: e.to_string(),
        })?;
        let records =
            page.get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| IngestError::Decode {
                    index: None,
                    message: "response object has no `data` array".into(),
                })?;
        for record in records {
            let index = posts.len();
            posts.push(
                decode_record(record).map_err(|message| IngestError::Decode {
                    index: Some(index),
                    message,
                })?,
            );
        }
    }
    Ok(posts)
}

pub(crate) fn decode_record(record: &Value) -> Result<RawPost, String> {
    let obj = record.as_object().ok_or("record is not an object")?;
    let text = |key: &str| -> Result<String, String> {
        match obj.get(key) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(Value::Number(n)) => Ok(n.to_string()),
            Some(other) => Err(format!("`{key}` has unexpected type: {other}")),
            None => Err(format!("missing `{key}`")),
        }
    };
    let integer = |key: &str| -> Result<i64, String> {
        let v = obj.get(key).ok_or_else(|| format!("missing `{key}`"))?;
        v.as_i64()
            .or_else(|| {
                v.as_f64()
                    .filter(|f| f.is_finite())
                    .map(|f| f.trunc() as i64)
            })
            .ok_or_else(|| format!("`{key}` is not a number: {v}"))
    };

    let body = match obj.get("selftext").or_else(|| obj.get("body")) {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(format!("`selftext` has unexpected type: {other}")),
    };
    let num_comments = integer("num_comments")?;
    if num_comments < 0 {
        return Err(format!("negative num_comments {num_comments}"));
    }
    let id = text("id")?;
    if id.is_empty() {
        return Err("empty `id`".into());
    }
    Ok(RawPost {
        id,
        title: text("title")?,
        body,
        score: integer("score")?,
        num_comments: num_comments as u64,
        created_utc: integer("created_utc")?,
        subreddit: text("subreddit")?,
    })
}

pub(crate) fn encode_record(post: &RawPost) -> Value {
    json!({
        "id": post.id,
        "title": post.title,
        "selftext": post.body,
        "score": post.score,
        "num_comments": post.num_comments,
        "created_utc": post.created_utc,
        "subreddit": post.subreddit,
    })
}

/// Writes posts as newline-delimited response pages of at most 100 records.
pub fn write_posts_fixture(path: impl AsRef<Path>, posts: &[RawPost]) -> Result<(), IngestError> {
    let path = path.as_ref();
    let io_err = |source| IngestError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    if posts.is_empty() {
        writeln!(out, "{}", json!({ "data": [] })).map_err(io_err)?;
    }
    for chunk in posts.chunks(PAGE_SIZE) {
        let page = json!({ "data": chunk.iter().map(encode_record).collect::<Vec<_>>() });
        writeln!(out, "{page}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
