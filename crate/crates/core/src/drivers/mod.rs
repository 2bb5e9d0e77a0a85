//! Platform drivers: the only code that talks to a CMS at runtime.
//!
//! A [`Driver`] translates canonical calls (get by id, search, update,
//! follow a relationship link) into one platform dialect and hands back
//! [`GenericResource`] values. Drivers never cache and never prefetch: every
//! call is exactly the HTTP requests it needs.

pub mod drupal;
pub mod query;
pub mod query_string;
pub mod record;
pub mod wordpress;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

pub use self::drupal::DrupalDriver;
pub use self::query::{
    query_builder, Filter, FilterOp, Page, QueryError, Scalar, SearchQuery, SearchQueryBuilder, SortDirection, Sorter,
};
pub use self::query_string::to_query_string;
pub use self::record::StagedResource;
pub use self::wordpress::WordPressDriver;
pub use crate::http::SiteCredentials;
use crate::http::{HttpClient, HttpResponse, TransportError};
use crate::metamodel::{CmsClass, CmsModel, CoreKind, Platform};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriverError {
    #[error("invalid base URL `{0}`")]
    InvalidBaseUrl(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("authentication failed on {0}")]
    AuthFailed(String),
    #[error("unreachable: {0}")]
    Unreachable(#[from] TransportError),
    #[error("malformed payload from {url}: {message}")]
    MalformedPayload { url: String, message: String },
    #[error("update rejected with HTTP {status}: {body}")]
    ValidationRejected { status: u16, body: String },
    #[error("unexpected HTTP {status} from {url}")]
    UnexpectedStatus { url: String, status: u16, body: String },
    #[error("class `{0}` has no endpoint")]
    NoEndpoint(String),
    #[error("resource has no relationship link `{0}`")]
    NoSuchRelationship(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// One content record as returned by a driver.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GenericResource {
    pub id: String,
    pub type_name: String,
    /// Scalar (or null) attribute values; unknown keys are kept verbatim.
    pub attributes: BTreeMap<String, Value>,
    pub related_links: BTreeMap<String, String>,
    pub last_updated: Option<String>,
}

impl GenericResource {
    pub fn raw(&self, name: &str) -> Option<&Value> {
        self.attributes.get(name).filter(|v| !v.is_null())
    }

    pub fn text(&self, name: &str) -> Option<String> {
        match self.raw(name)? {
            Value::String(s) => Some(s.clone()),
            other => Some(other.to_string()),
        }
    }

    pub fn integer(&self, name: &str) -> Option<i64> {
        self.raw(name)?.as_i64()
    }

    pub fn float(&self, name: &str) -> Option<f64> {
        self.raw(name)?.as_f64()
    }

    pub fn boolean(&self, name: &str) -> Option<bool> {
        self.raw(name)?.as_bool()
    }
}

/// The platform-agnostic runtime interface.
pub trait Driver: Send + Sync + fmt::Debug {
    fn platform(&self) -> Platform;

    fn model(&self) -> &CmsModel;

    fn get_by_id(&self, cls: &CmsClass, id: &str) -> Result<GenericResource, DriverError>;

    /// Returns at most `query.page().limit()` resources in server order.
    fn search(&self, cls: &CmsClass, query: &SearchQuery) -> Result<Vec<GenericResource>, DriverError>;

    /// Writes `changed` (possibly empty) and returns the updated resource.
    fn update(
        &self,
        resource: &GenericResource,
        changed: &BTreeMap<String, Value>,
    ) -> Result<GenericResource, DriverError>;

    /// Fetches the targets behind one related link with a single request.
    fn follow_link(&self, resource: &GenericResource, relationship: &str) -> Result<Vec<GenericResource>, DriverError>;
}

/// Builds the driver matching `model.platform`.
pub fn connect(
    model: Arc<CmsModel>,
    base_url: &str,
    credentials: SiteCredentials,
) -> Result<Arc<dyn Driver>, DriverError> {
    Ok(match model.platform {
        Platform::Drupal => Arc::new(DrupalDriver::new(model, base_url, credentials)?),
        Platform::WordPress => Arc::new(WordPressDriver::new(model, base_url, credentials)?),
    })
}

/// The site URL recorded in a model (`https://{host}{basePath}`).
pub fn default_base_url(model: &CmsModel) -> String {
    format!("https://{}{}", model.host, model.base_path)
}

/// State shared by both dialects.
#[derive(Debug, Clone)]
pub(crate) struct Connection {
    pub(crate) model: Arc<CmsModel>,
    pub(crate) base_url: String,
    pub(crate) client: HttpClient,
}

impl Connection {
    pub(crate) fn new(model: Arc<CmsModel>, base_url: &str, credentials: SiteCredentials) -> Result<Self, DriverError> {
        let parsed = url::Url::parse(base_url).map_err(|_| DriverError::InvalidBaseUrl(base_url.to_string()))?;
        if !matches!(parsed.scheme(), "http" | "https") {
            return Err(DriverError::InvalidBaseUrl(base_url.to_string()));
        }
        Ok(Connection {
            model,
            base_url: base_url.trim_end_matches('/').to_string(),
            client: HttpClient::new(credentials),
        })
    }

    /// Collection endpoint of a class; core `User` falls back to the
    /// platform's built-in users route.
    pub(crate) fn endpoint(&self, cls: &CmsClass, core_user: &str) -> Result<String, DriverError> {
        match &cls.endpoint_path {
            Some(path) => Ok(path.clone()),
            None if cls.is_core && cls.core_kind == CoreKind::User => Ok(core_user.to_string()),
            None => Err(DriverError::NoEndpoint(cls.name.clone())),
        }
    }

    pub(crate) fn class(&self, name: &str) -> Result<&CmsClass, DriverError> {
        self.model.class(name).ok_or_else(|| DriverError::UnknownClass(name.to_string()))
    }

    /// Class name of the targets of `relationship` on `type_name`.
    pub(crate) fn target_of(&self, type_name: &str, relationship: &str) -> String {
        self.model
            .class(type_name)
            .and_then(|c| c.relationship(relationship))
            .map(|r| r.target.clone())
            .unwrap_or_else(|| CoreKind::ContentEntity.name().to_string())
    }
}

/// Maps non-success statuses of read requests onto driver errors.
pub(crate) fn check_read(url: &str, resp: HttpResponse) -> Result<Value, DriverError> {
    match resp.status {
        200..=299 => serde_json::from_str(&resp.body)
            .map_err(|e| DriverError::MalformedPayload { url: url.to_string(), message: e.to_string() }),
        401 | 403 => Err(DriverError::AuthFailed(url.to_string())),
        404 => Err(DriverError::NotFound(url.to_string())),
        status => Err(DriverError::UnexpectedStatus { url: url.to_string(), status, body: resp.body }),
    }
}

/// Maps non-success statuses of writes; 4xx other than auth/404 keep the body.
pub(crate) fn check_write(url: &str, resp: HttpResponse) -> Result<Value, DriverError> {
    match resp.status {
        400 | 409 | 422 => Err(DriverError::ValidationRejected { status: resp.status, body: resp.body }),
        _ => check_read(url, resp),
    }
}

pub(crate) fn malformed(url: &str, message: impl Into<String>) -> DriverError {
    DriverError::MalformedPayload { url: url.to_string(), message: message.into() }
}

pub(crate) fn id_of(value: Option<&Value>) -> Option<String> {
    match value? {
        Value::String(s) if !s.is_empty() => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

pub(crate) fn encode_segment(s: &str) -> String {
    query_string::encode_component(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn typed_accessors() {
        let mut r = GenericResource { id: "1".into(), type_name: "Post".into(), ..Default::default() };
        r.attributes.insert("likes".into(), json!(4));
        r.attributes.insert("title".into(), json!("Hi"));
        r.attributes.insert("score".into(), json!(2.5));
        r.attributes.insert("sticky".into(), json!(true));
        r.attributes.insert("gone".into(), Value::Null);
        assert_eq!(r.integer("likes"), Some(4));
        assert_eq!(r.text("title").as_deref(), Some("Hi"));
        assert_eq!(r.float("score"), Some(2.5));
        assert_eq!(r.boolean("sticky"), Some(true));
        assert_eq!(r.raw("gone"), None);
        assert_eq!(r.text("missing"), None);
    }

    #[test]
    fn connection_rejects_bad_urls() {
        let model = Arc::new(crate::metamodel::core_model());
        assert!(matches!(
            connect(model.clone(), "ftp://x", SiteCredentials::none()),
            Err(DriverError::InvalidBaseUrl(_))
        ));
        assert!(connect(model, "http://127.0.0.1:1/api", SiteCredentials::none()).is_ok());
    }

    #[test]
    fn placeholder_classes_have_no_endpoint() {
        let model = Arc::new(
            crate::metamodel::core_model().add_class(CmsClass::extension("Ghost", CoreKind::ContentEntity)).unwrap(),
        );
        let driver = connect(model.clone(), "http://127.0.0.1:1/api", SiteCredentials::none()).unwrap();
        let ghost = model.class("Ghost").unwrap();
        let q = query_builder().build().unwrap();
        assert_eq!(driver.search(ghost, &q), Err(DriverError::NoEndpoint("Ghost".into())));
        assert_eq!(driver.get_by_id(ghost, "1"), Err(DriverError::NoEndpoint("Ghost".into())));
    }

    #[test]
    fn follow_link_without_link() {
        let model = Arc::new(crate::metamodel::core_model());
        let driver = connect(model, "http://127.0.0.1:1/api", SiteCredentials::none()).unwrap();
        let r = GenericResource { id: "1".into(), type_name: "User".into(), ..Default::default() };
        assert_eq!(driver.follow_link(&r, "author"), Err(DriverError::NoSuchRelationship("author".into())));
    }
}
