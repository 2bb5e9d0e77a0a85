//! Typed client for the Journal CMS site.
//!
//! Generated by cmsforge. Do not edit.

pub mod mobile_app;
pub mod records;
mod site_manager;

pub use cmsforge_core::drivers::{DriverError, Filter, SearchQuery, SearchQueryBuilder, SiteCredentials, Sorter};
pub use mobile_app::{MobileApp, ScenarioOutcome};
pub use records::{
    AgeRating,
    Audio,
    BannerAds,
    Image,
    NewsArticle,
    Podcast,
    Tag,
    User,
    Video,
    VideoArticle,
};
pub use site_manager::JournalSiteManager;
