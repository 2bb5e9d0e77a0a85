//! A small mobile-app flow over the Journal CMS client: show a
//! video feed, like the top video, then read the news it links to.

use std::sync::Arc;

use cmsforge_core::drivers::DriverError;

use crate::records::{NewsArticle, VideoArticle};
use crate::site_manager::JournalSiteManager;

/// What one run of [`MobileApp::main`] saw.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub feed_len: usize,
    pub liked_video_id: String,
    pub likes_before: i64,
    pub likes_after: i64,
    pub related_news: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct MobileApp {
    site: Arc<JournalSiteManager>,
}

impl MobileApp {
    pub fn new(site: Arc<JournalSiteManager>) -> Self {
        MobileApp { site }
    }

    pub fn with_default_site() -> Result<Self, DriverError> {
        Ok(MobileApp::new(JournalSiteManager::get_instance()?))
    }

    pub fn site(&self) -> &Arc<JournalSiteManager> {
        &self.site
    }

    /// The first page of videos in the site's own order.
    pub fn get_video_feed(&self) -> Result<Vec<VideoArticle>, DriverError> {
        let query = self.site.get_search_query_builder().build()?;
        self.site.search_video_article(&query)
    }

    /// Adds one like and saves; returns the new count.
    pub fn set_like(&self, video: &mut VideoArticle) -> Result<i64, DriverError> {
        let likes = video.get_likes().unwrap_or(0) + 1;
        video.set_likes(likes);
        video.save()?;
        Ok(likes)
    }

    pub fn get_related_news(&self, video: &VideoArticle) -> Result<Vec<NewsArticle>, DriverError> {
        video.get_related_articles()
    }

    pub fn main(&self) -> Result<ScenarioOutcome, DriverError> {
        let mut feed = self.get_video_feed()?;
        let feed_len = feed.len();
        let video = feed
            .first_mut()
            .ok_or_else(|| DriverError::NotFound(VideoArticle::CLASS_NAME.to_string()))?;
        let likes_before = video.get_likes().unwrap_or(0);
        let likes_after = self.set_like(video)?;
        let related_news = self.get_related_news(video)?.iter().map(|n| n.id().to_string()).collect();
        Ok(ScenarioOutcome {
            feed_len,
            liked_video_id: video.id().to_string(),
            likes_before,
            likes_after,
            related_news,
        })
    }
}
