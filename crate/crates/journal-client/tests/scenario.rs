use std::sync::Arc;

use cmsforge_core::drivers::connect;
use cmsforge_core::mock::{induce_model, journal_fixture, serve};
use journal_client::{JournalSiteManager, MobileApp, SiteCredentials, VideoArticle};

#[test]
fn mobile_app_likes_a_video_and_reads_related_news() {
    let def = journal_fixture();
    let server = serve(def.clone(), 0).unwrap();
    let site = JournalSiteManager::get_instance_at(&server.base_url(), SiteCredentials::none()).unwrap();
    assert!(Arc::ptr_eq(
        &site,
        &JournalSiteManager::get_instance_at(&server.base_url(), SiteCredentials::none()).unwrap()
    ));
    let app = MobileApp::new(site.clone());

    let outcome = app.main().unwrap();
    assert_eq!(outcome.feed_len, 6);
    assert_eq!(outcome.liked_video_id, "v1");
    assert_eq!((outcome.likes_before, outcome.likes_after), (42, 43));
    assert_eq!(outcome.related_news, ["n1", "n2"]);

    // An independent driver sees the saved like.
    let model = Arc::new(induce_model(&def).unwrap());
    let other = connect(model.clone(), &server.base_url(), SiteCredentials::none()).unwrap();
    let fresh = other.get_by_id(model.class("VideoArticle").unwrap(), "v1").unwrap();
    assert_eq!(fresh.integer("likes"), Some(43));

    let video: VideoArticle = site.get_video_article_by_id("v1").unwrap();
    server.clear_log();
    let news = app.get_related_news(&video).unwrap();
    assert_eq!(server.request_log().len(), 1);
    let n1 = def.records("node--news_article").find(|r| r.id == "n1").unwrap();
    assert_eq!(news[0].get_title().as_deref(), n1.attributes["title"].as_str());

    let author_id = &def.records("node--video_article").find(|r| r.id == "v1").unwrap().relationships["author"][0];
    let author = video.get_author().unwrap().unwrap();
    assert_eq!(author.id(), author_id);
    assert_eq!(author.get_name(), site.get_user_by_id(author_id).unwrap().get_name());
}

#[test]
fn staged_changes_are_local_until_saved() {
    let server = serve(journal_fixture(), 0).unwrap();
    let site = JournalSiteManager::get_instance_at(&server.base_url(), SiteCredentials::none()).unwrap();
    let mut video = site.get_video_article_by_id("v1").unwrap();
    video.set_title("Renamed");
    assert!(video.has_unsaved_changes());
    assert_eq!(video.get_title().as_deref(), Some("Renamed"));
    assert_ne!(site.get_video_article_by_id("v1").unwrap().get_title().as_deref(), Some("Renamed"));
    video.save().unwrap();
    assert!(!video.has_unsaved_changes());
    assert_eq!(site.get_video_article_by_id("v1").unwrap().get_title().as_deref(), Some("Renamed"));
}
