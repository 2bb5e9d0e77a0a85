//! Blocking HTTP transport shared by discovery and the drivers.

use std::fmt;
use std::time::Duration;

use base64::Engine;
use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};

/// Per-request timeout; discovery never retries.
pub const REQUEST_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AuthScheme {
    #[default]
    None,
    Basic,
}

/// Site credentials. The secret never shows up in `Debug` output.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SiteCredentials {
    username: String,
    secret: String,
    scheme: AuthScheme,
}

impl SiteCredentials {
    pub fn none() -> Self {
        SiteCredentials::default()
    }

    pub fn basic(username: impl Into<String>, secret: impl Into<String>) -> Self {
        SiteCredentials { username: username.into(), secret: secret.into(), scheme: AuthScheme::Basic }
    }

    pub fn username(&self) -> &str {
        &self.username
    }

    pub fn scheme(&self) -> AuthScheme {
        self.scheme
    }

    /// Value of the `Authorization` header, if any.
    pub fn authorization(&self) -> Option<String> {
        match self.scheme {
            AuthScheme::None => None,
            AuthScheme::Basic => {
                let raw = format!("{}:{}", self.username, self.secret);
                Some(format!("Basic {}", base64::engine::general_purpose::STANDARD.encode(raw)))
            }
        }
    }
}

impl fmt::Debug for SiteCredentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SiteCredentials")
            .field("username", &self.username)
            .field("secret", &"<redacted>")
            .field("scheme", &self.scheme)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

impl HttpResponse {
    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{url}: {message}")]
pub struct TransportError {
    pub url: String,
    pub message: String,
}

// Characters legal in our canonical query strings but not on the wire.
const WIRE_QUERY: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'<')
    .add(b'>')
    .add(b'[')
    .add(b']')
    .add(b'{')
    .add(b'}')
    .add(b'|')
    .add(b'\\')
    .add(b'^')
    .add(b'`');

/// Escapes the few characters the canonical query grammar keeps literal
/// (brackets, `<`, `>`) so the URL is valid on the wire. Percent-decoding
/// the result yields the canonical form again.
pub fn wire_query(query: &str) -> String {
    utf8_percent_encode(query, WIRE_QUERY).to_string()
}

#[derive(Clone)]
pub struct HttpClient {
    agent: ureq::Agent,
    credentials: SiteCredentials,
}

impl fmt::Debug for HttpClient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpClient").field("credentials", &self.credentials).finish()
    }
}

impl HttpClient {
    pub fn new(credentials: SiteCredentials) -> Self {
        let config =
            ureq::Agent::config_builder().timeout_global(Some(REQUEST_TIMEOUT)).http_status_as_error(false).build();
        HttpClient { agent: config.into(), credentials }
    }

    pub fn get(&self, url: &str, accept: &str) -> Result<HttpResponse, TransportError> {
        let req = self.agent.get(url).header("Accept", accept);
        let req = match self.credentials.authorization() {
            Some(auth) => req.header("Authorization", auth),
            None => req,
        };
        finish(url, req.call())
    }

    pub fn options(&self, url: &str, accept: &str) -> Result<HttpResponse, TransportError> {
        let req = self.agent.options(url).header("Accept", accept);
        let req = match self.credentials.authorization() {
            Some(auth) => req.header("Authorization", auth),
            None => req,
        };
        finish(url, req.call())
    }

    pub fn patch(&self, url: &str, content_type: &str, body: &str) -> Result<HttpResponse, TransportError> {
        let req = self.agent.patch(url).header("Accept", content_type).header("Content-Type", content_type);
        let req = match self.credentials.authorization() {
            Some(auth) => req.header("Authorization", auth),
            None => req,
        };
        finish(url, req.send(body))
    }

    pub fn post(&self, url: &str, content_type: &str, body: &str) -> Result<HttpResponse, TransportError> {
        let req = self.agent.post(url).header("Accept", content_type).header("Content-Type", content_type);
        let req = match self.credentials.authorization() {
            Some(auth) => req.header("Authorization", auth),
            None => req,
        };
        finish(url, req.send(body))
    }
}

fn finish(
    url: &str,
    result: Result<ureq::http::Response<ureq::Body>, ureq::Error>,
) -> Result<HttpResponse, TransportError> {
    let err = |e: ureq::Error| TransportError { url: url.to_string(), message: e.to_string() };
    let mut response = result.map_err(err)?;
    let status = response.status().as_u16();
    let body = response.body_mut().read_to_string().map_err(err)?;
    Ok(HttpResponse { status, body })
}
