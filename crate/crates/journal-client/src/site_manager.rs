//! Entry point to the Journal CMS site.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use cmsforge_core::drivers::{
    default_base_url, query_builder, Driver, DriverError, DrupalDriver, SearchQuery, SearchQueryBuilder, SiteCredentials,
};
use cmsforge_core::metamodel::{CmsClass, CmsModel};
use cmsforge_core::model_io::model_from_json;

use crate::records::{AgeRating, BannerAds, NewsArticle, Podcast, User, VideoArticle};

const MODEL_JSON: &str = include_str!("model.cmsmodel.json");

/// One instance per base URL; the first caller's credentials win.
#[derive(Debug)]
pub struct JournalSiteManager {
    base_url: String,
    driver: Arc<dyn Driver>,
}

type Instances = Mutex<BTreeMap<String, Arc<JournalSiteManager>>>;

fn instances() -> &'static Instances {
    static INSTANCES: OnceLock<Instances> = OnceLock::new();
    INSTANCES.get_or_init(|| Mutex::new(BTreeMap::new()))
}

impl JournalSiteManager {
    /// The model this client was generated from.
    pub fn model() -> Arc<CmsModel> {
        static MODEL: OnceLock<Arc<CmsModel>> = OnceLock::new();
        MODEL
            .get_or_init(|| Arc::new(model_from_json(MODEL_JSON).expect("embedded model is valid")))
            .clone()
    }

    /// The instance for the address recorded in the model, without credentials.
    pub fn get_instance() -> Result<Arc<Self>, DriverError> {
        Self::get_instance_at(&default_base_url(&Self::model()), SiteCredentials::none())
    }

    pub fn get_instance_at(base_url: &str, credentials: SiteCredentials) -> Result<Arc<Self>, DriverError> {
        let mut map = instances().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(site) = map.get(base_url) {
            return Ok(site.clone());
        }
        let driver = Arc::new(DrupalDriver::new(Self::model(), base_url, credentials)?);
        let site = Arc::new(JournalSiteManager { base_url: base_url.to_string(), driver });
        map.insert(base_url.to_string(), site.clone());
        Ok(site)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn driver(&self) -> &Arc<dyn Driver> {
        &self.driver
    }

    pub fn get_search_query_builder(&self) -> SearchQueryBuilder {
        query_builder()
    }

    fn class(&self, name: &str) -> Result<&CmsClass, DriverError> {
        self.driver.model().class(name).ok_or_else(|| DriverError::UnknownClass(name.to_string()))
    }

    pub fn get_age_rating_by_id(&self, id: &str) -> Result<AgeRating, DriverError> {
        let resource = self.driver.get_by_id(self.class(AgeRating::CLASS_NAME)?, id)?;
        Ok(AgeRating::from_resource(self.driver.clone(), resource))
    }

    pub fn search_age_rating(&self, query: &SearchQuery) -> Result<Vec<AgeRating>, DriverError> {
        let found = self.driver.search(self.class(AgeRating::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| AgeRating::from_resource(self.driver.clone(), r)).collect())
    }

    pub fn get_banner_ads_by_id(&self, id: &str) -> Result<BannerAds, DriverError> {
        let resource = self.driver.get_by_id(self.class(BannerAds::CLASS_NAME)?, id)?;
        Ok(BannerAds::from_resource(self.driver.clone(), resource))
    }

    pub fn search_banner_ads(&self, query: &SearchQuery) -> Result<Vec<BannerAds>, DriverError> {
        let found = self.driver.search(self.class(BannerAds::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| BannerAds::from_resource(self.driver.clone(), r)).collect())
    }

    pub fn get_news_article_by_id(&self, id: &str) -> Result<NewsArticle, DriverError> {
        let resource = self.driver.get_by_id(self.class(NewsArticle::CLASS_NAME)?, id)?;
        Ok(NewsArticle::from_resource(self.driver.clone(), resource))
    }

    pub fn search_news_article(&self, query: &SearchQuery) -> Result<Vec<NewsArticle>, DriverError> {
        let found = self.driver.search(self.class(NewsArticle::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| NewsArticle::from_resource(self.driver.clone(), r)).collect())
    }

    pub fn get_podcast_by_id(&self, id: &str) -> Result<Podcast, DriverError> {
        let resource = self.driver.get_by_id(self.class(Podcast::CLASS_NAME)?, id)?;
        Ok(Podcast::from_resource(self.driver.clone(), resource))
    }

    pub fn search_podcast(&self, query: &SearchQuery) -> Result<Vec<Podcast>, DriverError> {
        let found = self.driver.search(self.class(Podcast::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| Podcast::from_resource(self.driver.clone(), r)).collect())
    }

    pub fn get_user_by_id(&self, id: &str) -> Result<User, DriverError> {
        let resource = self.driver.get_by_id(self.class(User::CLASS_NAME)?, id)?;
        Ok(User::from_resource(self.driver.clone(), resource))
    }

    pub fn search_user(&self, query: &SearchQuery) -> Result<Vec<User>, DriverError> {
        let found = self.driver.search(self.class(User::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| User::from_resource(self.driver.clone(), r)).collect())
    }

    pub fn get_video_article_by_id(&self, id: &str) -> Result<VideoArticle, DriverError> {
        let resource = self.driver.get_by_id(self.class(VideoArticle::CLASS_NAME)?, id)?;
        Ok(VideoArticle::from_resource(self.driver.clone(), resource))
    }

    pub fn search_video_article(&self, query: &SearchQuery) -> Result<Vec<VideoArticle>, DriverError> {
        let found = self.driver.search(self.class(VideoArticle::CLASS_NAME)?, query)?;
        Ok(found.into_iter().map(|r| VideoArticle::from_resource(self.driver.clone(), r)).collect())
    }
}
