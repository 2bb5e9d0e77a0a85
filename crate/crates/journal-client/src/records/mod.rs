//! One record type per class of the Journal CMS model.

mod age_rating;
mod audio;
mod banner_ads;
mod image;
mod news_article;
mod podcast;
mod tag;
mod user;
mod video;
mod video_article;

pub use self::age_rating::AgeRating;
pub use self::audio::Audio;
pub use self::banner_ads::BannerAds;
pub use self::image::Image;
pub use self::news_article::NewsArticle;
pub use self::podcast::Podcast;
pub use self::tag::Tag;
pub use self::user::User;
pub use self::video::Video;
pub use self::video_article::VideoArticle;
