//! Cursor-paginated client for the store's public review endpoint.
//!
//! The endpoint returns pages of up to 100 reviews together with an opaque
//! cursor for the next page. The cursor must be sent back percent-encoded
//! exactly as received. The stream is exhausted when a page comes back with
//! no reviews or with the cursor that was just sent.

use std::time::Duration;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde_json::Value;

use super::{CollectionWindow, RateLimiter, RawReview};

pub const DEFAULT_ENDPOINT: &str = "https://store.steampowered.com/appreviews";

/// RFC 3986 unreserved characters pass through; everything else is escaped.
const CURSOR_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

const LANGUAGES: &[(&str, &str)] = &[
    ("bg", "bulgarian"),
    ("cs", "czech"),
    ("da", "danish"),
    ("de", "german"),
    ("el", "greek"),
    ("en", "english"),
    ("es", "spanish"),
    ("fi", "finnish"),
    ("fr", "french"),
    ("hu", "hungarian"),
    ("id", "indonesian"),
    ("it", "italian"),
    ("ja", "japanese"),
    ("ko", "koreana"),
    ("nl", "dutch"),
    ("no", "norwegian"),
    ("pl", "polish"),
    ("pt", "portuguese"),
    ("ro", "romanian"),
    ("ru", "russian"),
    ("sv", "swedish"),
    ("th", "thai"),
    ("tr", "turkish"),
    ("uk", "ukrainian"),
    ("vi", "vietnamese"),
    ("zh", "schinese"),
];

/// Maps an ISO 639-1 code to the language name the endpoint expects.
pub fn steam_language_name(iso: &str) -> Option<&'static str> {
    LANGUAGES
        .iter()
        .find(|(code, _)| *code == iso)
        .map(|(_, name)| *name)
}

fn iso_from_steam(name: &str) -> Option<&'static str> {
    LANGUAGES
        .iter()
        .find(|(_, n)| *n == name)
        .map(|(code, _)| *code)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct TransportError(pub String);

/// One GET per call. Implemented over HTTP by [`HttpTransport`]; tests replay
/// recorded pages through their own implementations.
pub trait PageTransport {
    fn get(&mut self, url: &str) -> Result<HttpResponse, TransportError>;
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .user_agent(concat!("semnet/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| TransportError(e.to_string()))?;
        Ok(Self { client })
    }
}

impl PageTransport for HttpTransport {
    fn get(&mut self, url: &str) -> Result<HttpResponse, TransportError> {
        let resp = self
            .client
            .get(url)
            .send()
            .map_err(|e| TransportError(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp.text().map_err(|e| TransportError(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    /// Base URL; the app id is appended as a path segment.
    pub endpoint: String,
    pub window: CollectionWindow,
    /// ISO 639-1 code.
    pub language: String,
    pub page_limit: usize,
    /// Retries after an HTTP 429 before giving up on a page.
    pub max_retries: u32,
    /// First backoff delay after a 429; doubles on each further attempt.
    pub backoff: Duration,
    /// Cursor to start from. `"*"` is the first page; a cursor taken from
    /// a [`FetchError`] resumes an interrupted run.
    pub start_cursor: String,
    pub rate_limiter: RateLimiter,
}

impl Default for FetchConfig {
    fn default() -> Self {
        Self {
            endpoint: DEFAULT_ENDPOINT.into(),
            window: CollectionWindow::unbounded(),
            language: "en".into(),
            page_limit: 100,
            max_retries: 5,
            backoff: Duration::from_secs(2),
            start_cursor: "*".into(),
            rate_limiter: RateLimiter::per_second(1.0),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("network failure at cursor {cursor:?}: {source}")]
    Network {
        cursor: String,
        #[source]
        source: TransportError,
    },
    #[error("still rate limited at cursor {cursor:?} after {attempts} attempts")]
    RateLimited { cursor: String, attempts: u32 },
    #[error("http status {status} at cursor {cursor:?}")]
    Http { status: u16, cursor: String },
    #[error("malformed payload: field `{field}`: {detail}")]
    Parse { field: String, detail: String },
}

impl FetchError {
    /// Whether rerunning from [`FetchError::cursor`] may succeed.
    pub fn is_retriable(&self) -> bool {
        match self {
            FetchError::Network { .. } | FetchError::RateLimited { .. } => true,
            FetchError::Http { status, .. } => *status >= 500,
            FetchError::InvalidRequest(_) | FetchError::Parse { .. } => false,
        }
    }

    pub fn cursor(&self) -> Option<&str> {
        match self {
            FetchError::Network { cursor, .. }
            | FetchError::RateLimited { cursor, .. }
            | FetchError::Http { cursor, .. } => Some(cursor),
            _ => None,
        }
    }
}

pub(crate) fn page_url(endpoint: &str, app_id: u32, cursor: &str, steam_lang: &str) -> String {
    format!(
        "{}/{}?json=1&num_per_page=100&cursor={}&language={}&filter=recent",
        endpoint.trim_end_matches('/'),
        app_id,
        utf8_percent_encode(cursor, CURSOR_ESCAPE),
        steam_lang
    )
}

struct Page {
    cursor: Option<String>,
    reviews: Vec<PageReview>,
}

struct PageReview {
    id: String,
    text: String,
    created_at: i64,
    steam_language: String,
    votes_up: u64,
}

fn parse_error(field: impl Into<String>, detail: impl Into<String>) -> FetchError {
    FetchError::Parse {
        field: field.into(),
        detail: detail.into(),
    }
}

fn parse_page(body: &str) -> Result<Page, FetchError> {
    let root: Value =
        serde_json::from_str(body).map_err(|e| parse_error("<root>", e.to_string()))?;
    let root = root
        .as_object()
        .ok_or_else(|| parse_error("<root>", "expected an object"))?;

    // An empty response body object is an exhausted stream.
    if root.is_empty() {
        return Ok(Page {
            cursor: None,
            reviews: Vec::new(),
        });
    }

    match root.get("success").and_then(Value::as_i64) {
        Some(1) => {}
        Some(other) => return Err(parse_error("success", format!("endpoint reported {other}"))),
        None => return Err(parse_error("success", "missing or not an integer")),
    }

    let cursor = match root.get("cursor") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(parse_error("cursor", "expected a string")),
    };

    let list = match root.get("reviews") {
        None | Some(Value::Null) => return Ok(Page { cursor, reviews: Vec::new() }),
        Some(Value::Array(list)) => list,
        Some(_) => return Err(parse_error("reviews", "expected an array")),
    };

    let mut reviews = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let field = |name: &str| format!("reviews[{i}].{name}");
        let obj = item
            .as_object()
            .ok_or_else(|| parse_error(format!("reviews[{i}]"), "expected an object"))?;
        let id = match obj.get("recommendationid") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(parse_error(field("recommendationid"), "missing or empty")),
        };
        let text = obj
            .get("review")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_error(field("review"), "missing or not a string"))?
            .to_owned();
        let created_at = obj
            .get("timestamp_created")
            .and_then(Value::as_i64)
            .ok_or_else(|| parse_error(field("timestamp_created"), "missing or not an integer"))?;
        let steam_language = obj
            .get("language")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_error(field("language"), "missing or not a string"))?
            .to_owned();
        let votes_up = match obj.get("votes_up") {
            None | Some(Value::Null) => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| parse_error(field("votes_up"), "not a non-negative integer"))?,
        };
        reviews.push(PageReview {
            id,
            text,
            created_at,
            steam_language,
            votes_up,
        });
    }
    Ok(Page { cursor, reviews })
}

/// Walks the review stream for `app_id` and returns the reviews that fall in
/// the configured window and language, in endpoint order.
pub fn fetch_reviews<T: PageTransport>(
    transport: &mut T,
    app_id: u32,
    config: &mut FetchConfig,
) -> Result<Vec<RawReview>, FetchError> {
    if app_id == 0 {
        return Err(FetchError::InvalidRequest("app_id must be positive".into()));
    }
    if config.page_limit == 0 {
        return Err(FetchError::InvalidRequest("page_limit must be at least 1".into()));
    }
    let steam_lang = steam_language_name(&config.language).ok_or_else(|| {
        FetchError::InvalidRequest(format!("unsupported language code {:?}", config.language))
    })?;

    let mut out = Vec::new();
    let mut cursor = config.start_cursor.clone();
    for page_no in 0..config.page_limit {
        let url = page_url(&config.endpoint, app_id, &cursor, steam_lang);
        let body = get_with_backoff(transport, &url, &cursor, config)?;
        let page = parse_page(&body)?;
        log::debug!("page {page_no}: {} reviews", page.reviews.len());
        if page.reviews.is_empty() {
            break;
        }
        for r in page.reviews {
            if r.steam_language != steam_lang || !config.window.contains(r.created_at) {
                continue;
            }
            out.push(RawReview {
                review_id: r.id,
                app_id,
                text: r.text,
                created_at: r.created_at,
                language: iso_from_steam(&r.steam_language)
                    .unwrap_or(&config.language)
                    .to_owned(),
                votes_up: r.votes_up,
            });
        }
        match page.cursor {
            Some(next) if next != cursor => cursor = next,
            _ => break,
        }
    }
    Ok(out)
}

fn get_with_backoff<T: PageTransport>(
    transport: &mut T,
    url: &str,
    cursor: &str,
    config: &mut FetchConfig,
) -> Result<String, FetchError> {
    let mut attempt = 0u32;
    loop {
        config.rate_limiter.acquire();
        let resp = transport.get(url).map_err(|source| FetchError::Network {
            cursor: cursor.to_owned(),
            source,
        })?;
        match resp.status {
            200 => return Ok(resp.body),
            429 => {
                if attempt >= config.max_retries {
                    return Err(FetchError::RateLimited {
                        cursor: cursor.to_owned(),
                        attempts: attempt + 1,
                    });
                }
                let delay = config.backoff.saturating_mul(1u32 << attempt.min(16));
                log::warn!("rate limited, retrying in {delay:?}");
                std::thread::sleep(delay);
                attempt += 1;
            }
            status => {
                return Err(FetchError::Http {
                    status,
                    cursor: cursor.to_owned(),
                })
            }
        }
    }
}
