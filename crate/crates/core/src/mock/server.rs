//! HTTP front end of the mock CMS.
//!
//! Everything is routed through one fallback handler into [`Site::respond`],
//! a synchronous function of the request, so the dialects can be exercised
//! without a socket.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime};

use axum::body::Body;
use axum::extract::{Request, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::Response;
use axum::Router;
use base64::Engine;
use percent_encoding::percent_decode_str;
use serde_json::{json, Map, Value};

use super::definition::{conforms, MockEntity, MockSiteDefinition, SeedRecord};
use super::{endpoint_path, related_link_template, MockError};
use crate::drivers::query_string::WORDPRESS_SEARCH_FIELDS;
use crate::metamodel::{AttributeType, Multiplicity, Platform};

const DRUPAL_MEDIA_TYPE: &str = "application/vnd.api+json";
const WORDPRESS_MEDIA_TYPE: &str = "application/json";
const MAX_BODY_BYTES: usize = 1 << 20;
const DRUPAL_DEFAULT_LIMIT: usize = 50;
const WORDPRESS_DEFAULT_PER_PAGE: usize = 10;
const WORDPRESS_MAX_PER_PAGE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestLogEntry {
    pub method: String,
    pub path: String,
    pub query: Option<String>,
    pub auth_present: bool,
    pub status: u16,
    pub timestamp: SystemTime,
}

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub host: IpAddr,
    /// 0 picks a free port.
    pub port: u16,
    /// Echo every request to stderr.
    pub log_to_stderr: bool,
}

impl Default for ServeOptions {
    fn default() -> Self {
        ServeOptions { host: IpAddr::V4(Ipv4Addr::LOCALHOST), port: 0, log_to_stderr: false }
    }
}

/// Starts serving `def` on localhost.
pub fn serve(def: MockSiteDefinition, port: u16) -> Result<MockServer, MockError> {
    serve_with(def, ServeOptions { port, ..ServeOptions::default() })
}

pub fn serve_with(def: MockSiteDefinition, options: ServeOptions) -> Result<MockServer, MockError> {
    def.validate()?;
    let io = |e: std::io::Error| MockError::Io(e.to_string());
    let listener = std::net::TcpListener::bind((options.host, options.port)).map_err(|e| {
        if e.kind() == std::io::ErrorKind::AddrInUse {
            MockError::PortInUse(options.port)
        } else {
            io(e)
        }
    })?;
    listener.set_nonblocking(true).map_err(io)?;
    let addr = listener.local_addr().map_err(io)?;

    let site = Arc::new(Site::new(def, options.log_to_stderr));
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(2)
        .thread_name("mock-cms")
        .enable_all()
        .build()
        .map_err(io)?;
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let app = Router::new().fallback(handle).with_state(site.clone());
    let listener = {
        let _guard = runtime.enter();
        tokio::net::TcpListener::from_std(listener).map_err(io)?
    };
    let task = runtime.spawn(async move {
        let _ = axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = stopped.await;
            })
            .await;
    });
    Ok(MockServer { addr, site, runtime: Some(runtime), stop: Some(stop), task: Some(task) })
}

/// A running mock site. Dropping it stops the server.
pub struct MockServer {
    addr: SocketAddr,
    site: Arc<Site>,
    runtime: Option<tokio::runtime::Runtime>,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    task: Option<tokio::task::JoinHandle<()>>,
}

impl std::fmt::Debug for MockServer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MockServer").field("addr", &self.addr).finish_non_exhaustive()
    }
}

impl MockServer {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Base URL to hand to discovery and drivers, including the base path.
    pub fn base_url(&self) -> String {
        format!("http://{}{}", self.addr, self.site.def.base_path)
    }

    pub fn request_log(&self) -> Vec<RequestLogEntry> {
        self.site.log.lock().expect("log poisoned").clone()
    }

    pub fn clear_log(&self) {
        self.site.log.lock().expect("log poisoned").clear();
    }

    /// Current content of one entity type, after any updates.
    pub fn records(&self, raw_type_name: &str) -> Vec<SeedRecord> {
        self.site.snapshot(raw_type_name)
    }

    /// Blocks until Ctrl-C, then stops.
    pub fn run_until_ctrl_c(mut self) -> Result<(), MockError> {
        let runtime = self.runtime.as_ref().expect("running");
        runtime.block_on(tokio::signal::ctrl_c()).map_err(|e| MockError::Io(e.to_string()))?;
        self.stop();
        Ok(())
    }

    pub fn shutdown(mut self) {
        self.stop();
    }

    fn stop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(runtime) = self.runtime.take() {
            if let Some(task) = self.task.take() {
                let _ = runtime.block_on(async { tokio::time::timeout(Duration::from_secs(2), task).await });
            }
            runtime.shutdown_background();
        }
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop();
    }
}

async fn handle(State(site): State<Arc<Site>>, req: Request) -> Response {
    let (parts, body) = req.into_parts();
    let body = match axum::body::to_bytes(body, MAX_BODY_BYTES).await {
        Ok(b) => b,
        Err(_) => {
            let mut resp = Response::new(Body::from("request body too large"));
            *resp.status_mut() = StatusCode::PAYLOAD_TOO_LARGE;
            return resp;
        }
    };
    let header = |name: header::HeaderName| parts.headers.get(name).and_then(|v| v.to_str().ok());
    let host = header(header::HOST).unwrap_or("localhost").to_string();
    let request = Incoming {
        method: parts.method.as_str(),
        path: parts.uri.path(),
        query: parts.uri.query(),
        authorization: header(header::AUTHORIZATION),
        host: &host,
        body: &body,
    };
    let reply = site.respond(&request);

    let mut resp = Response::new(Body::from(reply.body));
    *resp.status_mut() = StatusCode::from_u16(reply.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    let headers = resp.headers_mut();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static(reply.content_type));
    for (name, value) in reply.headers {
        if let Ok(v) = HeaderValue::from_str(&value) {
            headers.insert(name, v);
        }
    }
    resp
}

/// One decoded request.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Incoming<'a> {
    pub method: &'a str,
    pub path: &'a str,
    pub query: Option<&'a str>,
    pub authorization: Option<&'a str>,
    pub host: &'a str,
    pub body: &'a [u8],
}

#[derive(Debug, Clone)]
pub(crate) struct Reply {
    pub status: u16,
    pub content_type: &'static str,
    pub body: String,
    pub headers: Vec<(&'static str, String)>,
}

pub(crate) struct Site {
    def: MockSiteDefinition,
    store: BTreeMap<String, Mutex<Vec<SeedRecord>>>,
    expected_auth: Option<String>,
    log: Mutex<Vec<RequestLogEntry>>,
    log_to_stderr: bool,
}

impl Site {
    pub(crate) fn new(mut def: MockSiteDefinition, log_to_stderr: bool) -> Self {
        let mut store: BTreeMap<String, Vec<SeedRecord>> =
            def.schema.iter().map(|e| (e.raw_type_name.clone(), Vec::new())).collect();
        for rec in std::mem::take(&mut def.content) {
            store.get_mut(&rec.type_name).expect("validated").push(rec);
        }
        let expected_auth = def.auth.as_ref().map(|a| {
            let token = base64::engine::general_purpose::STANDARD.encode(format!("{}:{}", a.username, a.secret));
            format!("Basic {token}")
        });
        Site {
            def,
            store: store.into_iter().map(|(k, v)| (k, Mutex::new(v))).collect(),
            expected_auth,
            log: Mutex::new(Vec::new()),
            log_to_stderr,
        }
    }

    fn snapshot(&self, raw: &str) -> Vec<SeedRecord> {
        self.store.get(raw).map(|m| m.lock().expect("store poisoned").clone()).unwrap_or_default()
    }

    fn find(&self, raw: &str, id: &str) -> Option<SeedRecord> {
        self.store.get(raw)?.lock().expect("store poisoned").iter().find(|r| r.id == id).cloned()
    }

    fn media_type(&self) -> &'static str {
        match self.def.platform {
            Platform::Drupal => DRUPAL_MEDIA_TYPE,
            Platform::WordPress => WORDPRESS_MEDIA_TYPE,
        }
    }

    pub(crate) fn respond(&self, req: &Incoming<'_>) -> Reply {
        let reply = if self.expected_auth.is_some() && req.authorization != self.expected_auth.as_deref() {
            let mut r = self.error(401, "Unauthorized", "missing or invalid credentials");
            r.headers.push(("www-authenticate", "Basic realm=\"mock-cms\"".to_string()));
            r
        } else {
            self.route(req)
        };
        if self.log_to_stderr {
            let q = req.query.map(|q| format!("?{q}")).unwrap_or_default();
            eprintln!("{} {}{q} -> {}", req.method, req.path, reply.status);
        }
        self.log.lock().expect("log poisoned").push(RequestLogEntry {
            method: req.method.to_string(),
            path: req.path.to_string(),
            query: req.query.map(str::to_string),
            auth_present: req.authorization.is_some(),
            status: reply.status,
            timestamp: SystemTime::now(),
        });
        reply
    }

    fn route(&self, req: &Incoming<'_>) -> Reply {
        let base = &self.def.base_path;
        let rest = match req.path.strip_prefix(base.as_str()) {
            Some(rest) if rest.is_empty() || rest.starts_with('/') => rest,
            _ => return self.error(404, "Not Found", "outside the API base path"),
        };
        let segments: Vec<String> = rest
            .split('/')
            .filter(|s| !s.is_empty())
            .map(|s| percent_decode_str(s).decode_utf8_lossy().into_owned())
            .collect();
        let segs: Vec<&str> = segments.iter().map(String::as_str).collect();
        match self.def.platform {
            Platform::Drupal => self.route_drupal(req, &segs),
            Platform::WordPress => self.route_wordpress(req, &segs),
        }
    }

    fn link_base(&self, req: &Incoming<'_>) -> String {
        format!("http://{}{}", req.host, self.def.base_path)
    }

    fn json(&self, status: u16, body: Value) -> Reply {
        Reply { status, content_type: self.media_type(), body: body.to_string(), headers: Vec::new() }
    }

    fn error(&self, status: u16, title: &str, detail: &str) -> Reply {
        match self.def.platform {
            Platform::Drupal => self.json(
                status,
                json!({"jsonapi": {"version": "1.0"}, "errors": [{"status": status.to_string(), "title": title, "detail": detail}]}),
            ),
            Platform::WordPress => {
                let code = format!("rest_{}", title.to_lowercase().replace(' ', "_"));
                self.json(status, json!({"code": code, "message": detail, "data": {"status": status}}))
            }
        }
    }

    fn method_not_allowed(&self) -> Reply {
        self.error(405, "Method Not Allowed", "method not supported on this route")
    }

    // ---- Drupal ------------------------------------------------------------

    fn route_drupal(&self, req: &Incoming<'_>, segs: &[&str]) -> Reply {
        if segs == ["openapi.json"] {
            return match req.method {
                "GET" => self.json(200, self.openapi_document()),
                _ => self.method_not_allowed(),
            };
        }
        let Some(entity) = segs.get(..2).and_then(|p| self.def.entity(&format!("{}--{}", p[0], p[1]))) else {
            return self.error(404, "Not Found", "no such route");
        };
        match (req.method, &segs[2..]) {
            ("GET", []) => self.drupal_collection(req, entity),
            ("GET", [id]) => match self.find(&entity.raw_type_name, id) {
                Some(rec) => self
                    .json(200, json!({"jsonapi": {"version": "1.0"}, "data": self.drupal_resource(req, entity, &rec)})),
                None => self.error(404, "Not Found", &format!("no {} with id {id}", entity.raw_type_name)),
            },
            ("PATCH", [id]) => self.drupal_update(req, entity, id),
            ("GET", [id, rel]) => self.related(req, entity, id, rel),
            (_, [] | [_] | [_, _]) => self.method_not_allowed(),
            _ => self.error(404, "Not Found", "no such route"),
        }
    }

    fn openapi_document(&self) -> Value {
        let mut definitions = Map::new();
        for e in &self.def.schema {
            let mut attributes = Map::new();
            attributes.insert("id".into(), json!("String"));
            for a in &e.attributes {
                attributes.insert(a.name.clone(), json!(drupal_type_spelling(a.ty)));
            }
            let mut relationships = Map::new();
            for r in &e.relationships {
                let entry = json!({
                    "type": r.target,
                    "link": related_link_template(Platform::Drupal, &e.raw_type_name, &r.name),
                });
                let entry = match r.multiplicity {
                    Multiplicity::One => entry,
                    Multiplicity::Many => json!({"0": entry}),
                };
                relationships.insert(r.name.clone(), entry);
            }
            definitions.insert(
                e.raw_type_name.clone(),
                json!({
                    "type": "object",
                    "title": e.raw_type_name.replacen("--", ":", 1) + " Schema",
                    "properties": {"attributes": attributes, "relationships": relationships},
                }),
            );
        }
        json!({
            "swagger": "2.0",
            "info": {"title": self.def.site_name, "version": "1.0"},
            "host": self.def.host,
            "basePath": self.def.base_path,
            "schemes": ["https"],
            "definitions": definitions,
        })
    }

    fn item_url(&self, req: &Incoming<'_>, entity: &MockEntity, id: &str) -> String {
        format!(
            "{}{}/{}",
            self.link_base(req),
            endpoint_path(self.def.platform, &entity.raw_type_name),
            crate::drivers::query_string::encode_component(id)
        )
    }

    fn drupal_resource(&self, req: &Incoming<'_>, entity: &MockEntity, rec: &SeedRecord) -> Value {
        let mut attributes: Map<String, Value> = rec.attributes.clone().into_iter().collect();
        if let Some(ts) = &rec.last_updated {
            attributes.insert("changed".into(), json!(ts));
        }
        let item = self.item_url(req, entity, &rec.id);
        let mut relationships = Map::new();
        for r in &entity.relationships {
            let ids = rec.relationships.get(&r.name).cloned().unwrap_or_default();
            let identifiers: Vec<Value> = ids.iter().map(|id| json!({"type": r.target, "id": id})).collect();
            let data = match r.multiplicity {
                Multiplicity::Many => Value::Array(identifiers),
                Multiplicity::One => identifiers.into_iter().next().unwrap_or(Value::Null),
            };
            relationships.insert(
                r.name.clone(),
                json!({"data": data, "links": {"related": {"href": format!("{item}/{}", r.name)}}}),
            );
        }
        json!({
            "type": entity.raw_type_name,
            "id": rec.id,
            "attributes": attributes,
            "relationships": relationships,
            "links": {"self": {"href": item}},
        })
    }

    fn drupal_collection(&self, req: &Incoming<'_>, entity: &MockEntity) -> Reply {
        let plan = match parse_drupal_query(entity, req.query) {
            Ok(plan) => plan,
            Err(msg) => return self.error(400, "Bad Request", &msg),
        };
        let hits = execute(entity, self.snapshot(&entity.raw_type_name), &plan);
        let data: Vec<Value> = hits.iter().map(|r| self.drupal_resource(req, entity, r)).collect();
        self.json(200, json!({"jsonapi": {"version": "1.0"}, "data": data}))
    }

    fn drupal_update(&self, req: &Incoming<'_>, entity: &MockEntity, id: &str) -> Reply {
        let doc: Value = match serde_json::from_slice(req.body) {
            Ok(doc) => doc,
            Err(e) => return self.error(400, "Bad Request", &format!("body is not JSON: {e}")),
        };
        let Some(data) = doc.get("data").and_then(Value::as_object) else {
            return self.error(400, "Bad Request", "missing `data` object");
        };
        if data.get("type").and_then(Value::as_str) != Some(&entity.raw_type_name) {
            return self.error(409, "Conflict", "resource type does not match the endpoint");
        }
        if data.get("id").and_then(Value::as_str) != Some(id) {
            return self.error(409, "Conflict", "resource id does not match the URL");
        }
        if data.contains_key("relationships") {
            return self.error(422, "Unprocessable Entity", "relationship updates are not supported");
        }
        let changes = match data.get("attributes") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(a)) => a.clone(),
            Some(_) => return self.error(400, "Bad Request", "`attributes` is not an object"),
        };
        match self.apply_update(entity, id, &changes, 422) {
            Ok(rec) => {
                self.json(200, json!({"jsonapi": {"version": "1.0"}, "data": self.drupal_resource(req, entity, &rec)}))
            }
            Err(reply) => reply,
        }
    }

    /// Validates and applies attribute changes, serialized per type.
    fn apply_update(
        &self,
        entity: &MockEntity,
        id: &str,
        changes: &Map<String, Value>,
        invalid_status: u16,
    ) -> Result<SeedRecord, Reply> {
        for (name, value) in changes {
            match entity.attribute(name) {
                None => {
                    return Err(self.error(invalid_status, "Invalid Param", &format!("unknown attribute `{name}`")))
                }
                Some(a) if !conforms(a.ty, value) => {
                    return Err(self.error(invalid_status, "Invalid Param", &format!("`{name}` must be {}", a.ty)))
                }
                Some(_) => {}
            }
        }
        let mut records = self.store[&entity.raw_type_name].lock().expect("store poisoned");
        let Some(rec) = records.iter_mut().find(|r| r.id == id) else {
            return Err(self.error(404, "Not Found", &format!("no {} with id {id}", entity.raw_type_name)));
        };
        for (name, value) in changes {
            rec.attributes.insert(name.clone(), value.clone());
        }
        Ok(rec.clone())
    }

    /// Targets of one relationship of one record.
    fn related(&self, req: &Incoming<'_>, entity: &MockEntity, id: &str, rel: &str) -> Reply {
        let Some(r) = entity.relationship(rel) else {
            return self.error(404, "Not Found", &format!("no relationship `{rel}`"));
        };
        let Some(rec) = self.find(&entity.raw_type_name, id) else {
            return self.error(404, "Not Found", &format!("no {} with id {id}", entity.raw_type_name));
        };
        let ids = rec.relationships.get(rel).cloned().unwrap_or_default();
        let target = self.def.entity(&r.target);
        let targets: Vec<Value> = match target {
            Some(t) => ids
                .iter()
                .filter_map(|tid| self.find(&t.raw_type_name, tid))
                .map(|tr| match self.def.platform {
                    Platform::Drupal => self.drupal_resource(req, t, &tr),
                    Platform::WordPress => self.wordpress_record(req, t, &tr),
                })
                .collect(),
            None => Vec::new(),
        };
        let payload = match r.multiplicity {
            Multiplicity::Many => Value::Array(targets),
            Multiplicity::One => targets.into_iter().next().unwrap_or(Value::Null),
        };
        match self.def.platform {
            Platform::Drupal => self.json(200, json!({"jsonapi": {"version": "1.0"}, "data": payload})),
            Platform::WordPress => self.json(200, payload),
        }
    }

    // ---- WordPress ---------------------------------------------------------

    fn route_wordpress(&self, req: &Incoming<'_>, segs: &[&str]) -> Reply {
        let rest = match segs {
            ["wp-json"] => {
                return match req.method {
                    "GET" => self.json(200, self.wordpress_index()),
                    _ => self.method_not_allowed(),
                }
            }
            ["wp-json", "wp", "v2", rest @ ..] => rest,
            _ => return self.error(404, "No Route", "no route was found matching the URL and request method"),
        };
        if rest == ["taxonomies"] {
            return match req.method {
                "GET" => self.json(200, self.taxonomy_registry()),
                _ => self.method_not_allowed(),
            };
        }
        let Some(entity) = rest.first().and_then(|b| self.def.entity(b)) else {
            return self.error(404, "No Route", "no route was found matching the URL and request method");
        };
        match (req.method, &rest[1..]) {
            ("OPTIONS", []) => self.json(200, self.route_schema(entity)),
            ("GET", []) => self.wordpress_collection(req, entity),
            ("GET", [id]) => match self.find(&entity.raw_type_name, id) {
                Some(rec) => self.json(200, self.wordpress_record(req, entity, &rec)),
                None => self.error(404, "Invalid Id", &format!("invalid {} id", entity.raw_type_name)),
            },
            ("POST" | "PUT" | "PATCH", [id]) => self.wordpress_update(req, entity, id),
            ("GET", [id, rel]) => self.related(req, entity, id, rel),
            (_, [] | [_] | [_, _]) => self.method_not_allowed(),
            _ => self.error(404, "No Route", "no route was found matching the URL and request method"),
        }
    }

    fn wordpress_index(&self) -> Value {
        let mut routes = Map::new();
        routes.insert("/".into(), json!({"namespace": "", "methods": ["GET"]}));
        routes.insert("/wp/v2".into(), json!({"namespace": "wp/v2", "methods": ["GET"]}));
        routes.insert("/wp/v2/taxonomies".into(), json!({"namespace": "wp/v2", "methods": ["GET"]}));
        routes.insert("/wp/v2/types".into(), json!({"namespace": "wp/v2", "methods": ["GET"]}));
        for e in &self.def.schema {
            let base = &e.raw_type_name;
            routes.insert(
                format!("/wp/v2/{base}"),
                json!({"namespace": "wp/v2", "methods": ["GET", "POST"], "endpoints": [{"methods": ["GET"]}, {"methods": ["POST"]}]}),
            );
            routes.insert(
                format!("/wp/v2/{base}/(?P<id>[\\w-]+)"),
                json!({"namespace": "wp/v2", "methods": ["GET", "POST"]}),
            );
        }
        let url = format!("https://{}{}", self.def.host, self.def.base_path);
        json!({
            "name": self.def.site_name,
            "description": "",
            "url": url,
            "home": url,
            "namespaces": ["wp/v2"],
            "routes": routes,
        })
    }

    fn taxonomy_registry(&self) -> Value {
        let registry: Map<String, Value> = self
            .def
            .schema
            .iter()
            .filter(|e| e.taxonomy)
            .map(|e| {
                (
                    e.raw_type_name.clone(),
                    json!({"name": e.raw_type_name, "slug": e.raw_type_name, "rest_base": e.raw_type_name}),
                )
            })
            .collect();
        Value::Object(registry)
    }

    fn route_schema(&self, entity: &MockEntity) -> Value {
        let mut properties = Map::new();
        properties.insert("id".into(), json!({"type": "string", "readonly": true}));
        properties.insert("modified".into(), json!({"type": "string", "format": "date-time", "readonly": true}));
        let mut args = Map::new();
        for a in &entity.attributes {
            properties.insert(a.name.clone(), wordpress_type_schema(a.ty));
            args.insert(a.name.clone(), wordpress_type_schema(a.ty));
        }
        let mut links: Vec<Value> = entity
            .relationships
            .iter()
            .map(|r| {
                json!({
                    "rel": r.name,
                    "href": related_link_template(Platform::WordPress, &entity.raw_type_name, &r.name),
                    "target": r.target,
                    "multiple": r.multiplicity == Multiplicity::Many,
                })
            })
            .collect();
        links.push(json!({"rel": "https://api.w.org/action-publish", "title": "The current user can publish.", "href": "{+self}"}));
        json!({
            "namespace": "wp/v2",
            "methods": ["GET", "POST"],
            "endpoints": [
                {"methods": ["GET"], "args": {"search": {"type": "string"}, "per_page": {"type": "integer"}, "offset": {"type": "integer"}, "orderby": {"type": "string"}, "order": {"type": "string"}}},
                {"methods": ["POST"], "args": args},
            ],
            "schema": {
                "$schema": "http://json-schema.org/draft-04/schema#",
                "title": entity.raw_type_name,
                "type": "object",
                "properties": properties,
                "links": links,
            },
        })
    }

    fn wordpress_record(&self, req: &Incoming<'_>, entity: &MockEntity, rec: &SeedRecord) -> Value {
        let mut obj = Map::new();
        obj.insert("id".into(), wordpress_id(&rec.id));
        if let Some(ts) = &rec.last_updated {
            obj.insert("modified".into(), json!(ts));
        }
        for (k, v) in &rec.attributes {
            obj.insert(k.clone(), v.clone());
        }
        let item = self.item_url(req, entity, &rec.id);
        let collection =
            format!("{}{}", self.link_base(req), endpoint_path(Platform::WordPress, &entity.raw_type_name));
        let mut links = Map::new();
        links.insert("self".into(), json!([{"href": item}]));
        links.insert("collection".into(), json!([{"href": collection}]));
        for r in &entity.relationships {
            links.insert(r.name.clone(), json!([{"embeddable": true, "href": format!("{item}/{}", r.name)}]));
        }
        obj.insert("_links".into(), Value::Object(links));
        Value::Object(obj)
    }

    fn wordpress_collection(&self, req: &Incoming<'_>, entity: &MockEntity) -> Reply {
        let plan = match parse_wordpress_query(entity, req.query) {
            Ok(plan) => plan,
            Err(msg) => return self.error(400, "Invalid Param", &msg),
        };
        let records = self.snapshot(&entity.raw_type_name);
        let total = execute(entity, records.clone(), &Plan { offset: 0, limit: usize::MAX, ..plan.clone() }).len();
        let hits = execute(entity, records, &plan);
        let data: Vec<Value> = hits.iter().map(|r| self.wordpress_record(req, entity, r)).collect();
        let mut reply = self.json(200, Value::Array(data));
        reply.headers.push(("x-wp-total", total.to_string()));
        reply.headers.push(("x-wp-totalpages", total.div_ceil(plan.limit.max(1)).to_string()));
        reply
    }

    fn wordpress_update(&self, req: &Incoming<'_>, entity: &MockEntity, id: &str) -> Reply {
        let changes = match serde_json::from_slice::<Value>(req.body) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return self.error(400, "Invalid Json", "body must be a JSON object"),
            Err(e) => return self.error(400, "Invalid Json", &e.to_string()),
        };
        match self.apply_update(entity, id, &changes, 400) {
            Ok(rec) => self.json(200, self.wordpress_record(req, entity, &rec)),
            Err(reply) => reply,
        }
    }
}

fn drupal_type_spelling(ty: AttributeType) -> &'static str {
    match ty {
        AttributeType::Text => "String",
        AttributeType::Integer => "Integer",
        AttributeType::Float => "Float",
        AttributeType::Boolean => "Boolean",
        AttributeType::DateTime => "DateTime",
        AttributeType::Unknown => "Unknown",
    }
}

fn wordpress_type_schema(ty: AttributeType) -> Value {
    match ty {
        AttributeType::Text => json!({"type": "string"}),
        AttributeType::Integer => json!({"type": "integer"}),
        AttributeType::Float => json!({"type": "number"}),
        AttributeType::Boolean => json!({"type": "boolean"}),
        AttributeType::DateTime => json!({"type": "string", "format": "date-time"}),
        AttributeType::Unknown => json!({"type": "object"}),
    }
}

/// Numeric-looking ids go out as JSON numbers, like WordPress post ids.
fn wordpress_id(id: &str) -> Value {
    match id.parse::<u64>() {
        Ok(n) if n.to_string() == id => json!(n),
        _ => json!(id),
    }
}

// ---- query evaluation ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Gt,
    Lt,
    Contains,
    /// WordPress `search`: substring of any search field.
    Search,
}

#[derive(Debug, Clone)]
struct Condition {
    field: String,
    op: Op,
    value: String,
}

#[derive(Debug, Clone)]
struct Plan {
    conditions: Vec<Condition>,
    sort: Vec<(String, bool)>,
    limit: usize,
    offset: usize,
}

fn query_pairs(query: Option<&str>) -> Vec<(String, String)> {
    let decode = |s: &str| percent_decode_str(s).decode_utf8_lossy().into_owned();
    query
        .unwrap_or_default()
        .split('&')
        .filter(|p| !p.is_empty())
        .map(|p| match p.split_once('=') {
            Some((k, v)) => (decode(k), decode(v)),
            None => (decode(p), String::new()),
        })
        .collect()
}

fn known_field(entity: &MockEntity, field: &str) -> Result<(), String> {
    match entity.field_type(field) {
        Some(_) => Ok(()),
        None => Err(format!("unknown field `{field}`")),
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize, String> {
    value.parse().map_err(|_| format!("`{key}` must be a non-negative integer"))
}

fn parse_drupal_query(entity: &MockEntity, query: Option<&str>) -> Result<Plan, String> {
    let mut filters: BTreeMap<usize, [Option<String>; 3]> = BTreeMap::new();
    let mut plan = Plan { conditions: Vec::new(), sort: Vec::new(), limit: DRUPAL_DEFAULT_LIMIT, offset: 0 };
    for (key, value) in query_pairs(query) {
        if let Some(rest) = key.strip_prefix("filter[") {
            let (index, part) = rest
                .split_once("][condition][")
                .and_then(|(i, p)| Some((i.parse::<usize>().ok()?, p.strip_suffix(']')?)))
                .ok_or_else(|| format!("unsupported filter parameter `{key}`"))?;
            let slot = match part {
                "path" => 0,
                "operator" => 1,
                "value" => 2,
                _ => return Err(format!("unsupported filter parameter `{key}`")),
            };
            let entry = filters.entry(index).or_default();
            if entry[slot].replace(value).is_some() {
                return Err(format!("`{key}` given twice"));
            }
            continue;
        }
        match key.as_str() {
            "sort" => {
                for k in value.split(',') {
                    let (field, desc) = match k.strip_prefix('-') {
                        Some(f) => (f, true),
                        None => (k, false),
                    };
                    known_field(entity, field)?;
                    if plan.sort.iter().any(|(f, _)| f == field) {
                        return Err(format!("sort field `{field}` given twice"));
                    }
                    plan.sort.push((field.to_string(), desc));
                }
            }
            "page[limit]" => {
                plan.limit = parse_count(&key, &value)?;
                if plan.limit == 0 {
                    return Err("`page[limit]` must be positive".into());
                }
            }
            "page[offset]" => plan.offset = parse_count(&key, &value)?,
            _ => return Err(format!("unsupported query parameter `{key}`")),
        }
    }
    for (i, [path, operator, value]) in filters {
        let (Some(field), Some(operator)) = (path, operator) else {
            return Err(format!("filter {i} lacks a path or an operator"));
        };
        known_field(entity, &field)?;
        let op = match operator.as_str() {
            "=" => Op::Eq,
            "<>" => Op::Ne,
            ">" => Op::Gt,
            "<" => Op::Lt,
            "CONTAINS" => Op::Contains,
            other => return Err(format!("unsupported operator `{other}`")),
        };
        plan.conditions.push(Condition { field, op, value: value.unwrap_or_default() });
    }
    Ok(plan)
}

fn parse_wordpress_query(entity: &MockEntity, query: Option<&str>) -> Result<Plan, String> {
    let mut plan = Plan { conditions: Vec::new(), sort: Vec::new(), limit: WORDPRESS_DEFAULT_PER_PAGE, offset: 0 };
    let mut orderby = None;
    let mut descending = true;
    let mut page = None;
    let mut offset = None;
    for (key, value) in query_pairs(query) {
        match key.as_str() {
            "search" => plan.conditions.push(Condition { field: String::new(), op: Op::Search, value }),
            "orderby" => {
                known_field(entity, &value)?;
                orderby = Some(value);
            }
            "order" => {
                descending = match value.as_str() {
                    "asc" => false,
                    "desc" => true,
                    _ => return Err("`order` must be asc or desc".into()),
                }
            }
            "per_page" => {
                plan.limit = parse_count(&key, &value)?;
                if !(1..=WORDPRESS_MAX_PER_PAGE).contains(&plan.limit) {
                    return Err(format!("`per_page` must be between 1 and {WORDPRESS_MAX_PER_PAGE}"));
                }
            }
            "offset" => offset = Some(parse_count(&key, &value)?),
            "page" => page = Some(parse_count(&key, &value)?.max(1)),
            field => {
                known_field(entity, field)?;
                plan.conditions.push(Condition { field: key.clone(), op: Op::Eq, value });
            }
        }
    }
    plan.offset = offset.unwrap_or_else(|| (page.unwrap_or(1) - 1) * plan.limit);
    if let Some(field) = orderby {
        plan.sort.push((field, descending));
    }
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq)]
enum Key {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

fn rendered(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn stored_key(ty: AttributeType, v: &Value) -> Key {
    match (ty, v) {
        (AttributeType::Integer | AttributeType::Float, Value::Number(n)) => match n.as_i64() {
            Some(i) => Key::Int(i),
            None => Key::Num(n.as_f64().unwrap_or(f64::NAN)),
        },
        (AttributeType::Boolean, Value::Bool(b)) => Key::Bool(*b),
        _ => Key::Text(rendered(v)),
    }
}

fn wanted_key(ty: AttributeType, s: &str) -> Option<Key> {
    match ty {
        AttributeType::Integer | AttributeType::Float => match s.parse::<i64>() {
            Ok(i) => Some(Key::Int(i)),
            Err(_) => s.parse::<f64>().ok().filter(|f| f.is_finite()).map(Key::Num),
        },
        AttributeType::Boolean => match s {
            "true" => Some(Key::Bool(true)),
            "false" => Some(Key::Bool(false)),
            _ => None,
        },
        _ => Some(Key::Text(s.to_string())),
    }
}

fn order(a: &Key, b: &Key) -> Option<Ordering> {
    match (a, b) {
        (Key::Int(x), Key::Int(y)) => Some(x.cmp(y)),
        (Key::Int(x), Key::Num(y)) => (*x as f64).partial_cmp(y),
        (Key::Num(x), Key::Int(y)) => x.partial_cmp(&(*y as f64)),
        (Key::Num(x), Key::Num(y)) => x.partial_cmp(y),
        (Key::Bool(x), Key::Bool(y)) => Some(x.cmp(y)),
        (Key::Text(x), Key::Text(y)) => Some(x.cmp(y)),
        _ => None,
    }
}

fn value_of<'a>(rec: &'a SeedRecord, field: &str, id: &'a Value) -> Option<&'a Value> {
    if field == "id" {
        return Some(id);
    }
    rec.attributes.get(field).filter(|v| !v.is_null())
}

fn satisfies(entity: &MockEntity, rec: &SeedRecord, c: &Condition) -> bool {
    let id = Value::String(rec.id.clone());
    if c.op == Op::Search {
        return WORDPRESS_SEARCH_FIELDS.iter().any(|f| {
            entity.attribute(f).is_some() && value_of(rec, f, &id).is_some_and(|v| rendered(v).contains(&c.value))
        });
    }
    let ty = entity.field_type(&c.field).unwrap_or(AttributeType::Unknown);
    let Some(v) = value_of(rec, &c.field, &id) else {
        return c.op == Op::Ne;
    };
    if c.op == Op::Contains {
        return rendered(v).contains(&c.value);
    }
    let ord = wanted_key(ty, &c.value).and_then(|w| order(&stored_key(ty, v), &w));
    match c.op {
        Op::Eq => ord == Some(Ordering::Equal),
        Op::Ne => ord != Some(Ordering::Equal),
        Op::Gt => ord == Some(Ordering::Greater),
        Op::Lt => ord == Some(Ordering::Less),
        Op::Contains | Op::Search => unreachable!(),
    }
}

fn execute(entity: &MockEntity, records: Vec<SeedRecord>, plan: &Plan) -> Vec<SeedRecord> {
    let mut hits: Vec<SeedRecord> =
        records.into_iter().filter(|r| plan.conditions.iter().all(|c| satisfies(entity, r, c))).collect();
    hits.sort_by(|a, b| {
        let (ida, idb) = (Value::String(a.id.clone()), Value::String(b.id.clone()));
        for (field, desc) in &plan.sort {
            let ty = entity.field_type(field).unwrap_or(AttributeType::Unknown);
            let ord = match (value_of(a, field, &ida), value_of(b, field, &idb)) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => {
                    order(&stored_key(ty, x), &stored_key(ty, y)).unwrap_or_else(|| rendered(x).cmp(&rendered(y)))
                }
            };
            let ord = if *desc { ord.reverse() } else { ord };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.id.cmp(&b.id)
    });
    hits.into_iter().skip(plan.offset).take(plan.limit).collect()
}
