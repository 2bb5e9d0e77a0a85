//! The canonical, platform-independent search query and its builder.

use std::fmt;

use thiserror::Error;

/// Scalar filter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Text(String),
    Integer(i64),
    Float(f64),
    Boolean(bool),
}

impl Scalar {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Scalar::Integer(_) | Scalar::Float(_))
    }

    /// Whether the value is an RFC 3339 timestamp.
    pub fn is_datetime(&self) -> bool {
        match self {
            Scalar::Text(s) => chrono::DateTime::parse_from_rfc3339(s).is_ok(),
            _ => false,
        }
    }
}

/// Wire rendering: booleans as `true`/`false`, numbers in minimal decimal
/// form, text verbatim (unencoded).
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Text(s) => f.write_str(s),
            Scalar::Integer(i) => write!(f, "{i}"),
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Boolean(b) => write!(f, "{b}"),
        }
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Text(s.to_string())
    }
}

impl From<String> for Scalar {
    fn from(s: String) -> Self {
        Scalar::Text(s)
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Self {
        Scalar::Integer(i)
    }
}

impl From<i32> for Scalar {
    fn from(i: i32) -> Self {
        Scalar::Integer(i.into())
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Boolean(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterOp {
    Eq,
    Ne,
    Gt,
    Lt,
    Contains,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub field: String,
    pub op: FilterOp,
    pub value: Scalar,
}

impl Filter {
    pub fn new(field: impl Into<String>, op: FilterOp, value: impl Into<Scalar>) -> Self {
        Filter { field: field.into(), op, value: value.into() }
    }

    pub fn eq(field: impl Into<String>, value: impl Into<Scalar>) -> Self {
        Filter::new(field, FilterOp::Eq, value)
    }

    pub fn ne(field: impl Into<String>, value: impl Into<Scalar>) -> Self {
        Filter::new(field, FilterOp::Ne, value)
    }

    pub fn gt(field: impl Into<String>, value: impl Into<Scalar>) -> Self {
        Filter::new(field, FilterOp::Gt, value)
    }

    pub fn lt(field: impl Into<String>, value: impl Into<Scalar>) -> Self {
        Filter::new(field, FilterOp::Lt, value)
    }

    pub fn contains(field: impl Into<String>, value: impl Into<String>) -> Self {
        Filter::new(field, FilterOp::Contains, Scalar::Text(value.into()))
    }

    fn check(&self) -> Result<(), QueryError> {
        if self.field.is_empty() {
            return Err(QueryError::EmptyField);
        }
        if let Scalar::Float(x) = self.value {
            if !x.is_finite() {
                return Err(QueryError::InvalidFilterValue {
                    field: self.field.clone(),
                    reason: "floats must be finite".into(),
                });
            }
        }
        if matches!(self.op, FilterOp::Gt | FilterOp::Lt) && !(self.value.is_numeric() || self.value.is_datetime()) {
            return Err(QueryError::InvalidFilterValue {
                field: self.field.clone(),
                reason: "ordering comparisons need a numeric or date-time value".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SortDirection {
    Asc,
    Desc,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sorter {
    pub field: String,
    pub direction: SortDirection,
}

impl Sorter {
    pub fn asc(field: impl Into<String>) -> Self {
        Sorter { field: field.into(), direction: SortDirection::Asc }
    }

    pub fn desc(field: impl Into<String>) -> Self {
        Sorter { field: field.into(), direction: SortDirection::Desc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Page {
    limit: u32,
    offset: u32,
}

impl Page {
    pub const DEFAULT_LIMIT: u32 = 20;

    pub fn new(limit: u32, offset: u32) -> Result<Self, QueryError> {
        if limit < 1 {
            return Err(QueryError::InvalidPage { limit });
        }
        Ok(Page { limit, offset })
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }
}

impl Default for Page {
    fn default() -> Self {
        Page { limit: Page::DEFAULT_LIMIT, offset: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error("field `{0}` is sorted more than once")]
    DuplicateSortField(String),
    #[error("page limit must be at least 1, got {limit}")]
    InvalidPage { limit: u32 },
    #[error("filter and sort fields must be non-empty")]
    EmptyField,
    #[error("invalid value for `{field}`: {reason}")]
    InvalidFilterValue { field: String, reason: String },
    #[error("filter not supported by this platform: {0}")]
    UnsupportedFilter(String),
    #[error("sort not supported by this platform: {0}")]
    UnsupportedSort(String),
}

/// An immutable query: filters (conjunctive), sorters and a page.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SearchQuery {
    filters: Vec<Filter>,
    sorters: Vec<Sorter>,
    page: Page,
}

impl SearchQuery {
    pub fn builder() -> SearchQueryBuilder {
        SearchQueryBuilder::default()
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn sorters(&self) -> &[Sorter] {
        &self.sorters
    }

    pub fn page(&self) -> Page {
        self.page
    }
}

pub fn query_builder() -> SearchQueryBuilder {
    SearchQueryBuilder::default()
}

/// Accumulates filters, sorters and pagination. Validation happens in
/// [`build`](Self::build); the builder stays usable afterwards.
#[derive(Debug, Clone, Default)]
pub struct SearchQueryBuilder {
    filters: Vec<Filter>,
    sorters: Vec<Sorter>,
    limit: Option<u32>,
    offset: u32,
}

impl SearchQueryBuilder {
    pub fn filter(mut self, filter: Filter) -> Self {
        self.filters.push(filter);
        self
    }

    pub fn order_by(mut self, sorter: Sorter) -> Self {
        self.sorters.push(sorter);
        self
    }

    pub fn page(mut self, limit: u32, offset: u32) -> Self {
        self.limit = Some(limit);
        self.offset = offset;
        self
    }

    pub fn build(&self) -> Result<SearchQuery, QueryError> {
        for f in &self.filters {
            f.check()?;
        }
        for (i, s) in self.sorters.iter().enumerate() {
            if s.field.is_empty() {
                return Err(QueryError::EmptyField);
            }
            if self.sorters[..i].iter().any(|p| p.field == s.field) {
                return Err(QueryError::DuplicateSortField(s.field.clone()));
            }
        }
        let page = match self.limit {
            Some(limit) => Page::new(limit, self.offset)?,
            None => Page { limit: Page::DEFAULT_LIMIT, offset: self.offset },
        };
        Ok(SearchQuery { filters: self.filters.clone(), sorters: self.sorters.clone(), page })
    }
}
