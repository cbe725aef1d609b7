//! Stateless HTTP endpoints. Every request carries its curve document as the
//! JSON body; numeric options travel in the query string.
//!
//! | path        | query                               | response               |
//! |-------------|-------------------------------------|------------------------|
//! | `/validate` |                                     | curve summary          |
//! | `/sample`   | `t` (1), `count` (400)              | points                 |
//! | `/decompose`|                                     | decomposition          |
//! | `/limit`    |                                     | regular control curve  |
//! | `/report`   | `schedule=10,100,…`, `samples`, `tol` | convergence report   |
//!
//! Failures answer with `{code, message, field}`.

use std::collections::HashMap;
use std::net::SocketAddr;

use axum::extract::Query;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{middleware, Json, Router};
use serde::Serialize;
use toric_nurbs::{CurveDocument, Error};

use crate::api::{self, ApiError, DEFAULT_SAMPLES, DEFAULT_SCHEDULE, DEFAULT_TOL};

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.code.as_str() {
            "parse_error" => StatusCode::BAD_REQUEST,
            "io_error" => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        (status, Json(self)).into_response()
    }
}

type Params = Query<HashMap<String, String>>;

fn param<T: std::str::FromStr>(
    q: &HashMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, ApiError> {
    match q.get(key) {
        None => Ok(default),
        Some(v) => v.trim().parse().map_err(|_| {
            ApiError::from(Error::Validation {
                field: key.to_string(),
                message: format!("cannot parse `{v}`"),
            })
        }),
    }
}

fn schedule(q: &HashMap<String, String>) -> Result<Vec<f64>, ApiError> {
    let Some(text) = q.get("schedule") else {
        return Ok(DEFAULT_SCHEDULE.to_vec());
    };
    text.split(',')
        .enumerate()
        .map(|(k, v)| {
            v.trim().parse().map_err(|_| {
                ApiError::from(Error::Validation {
                    field: format!("schedule[{k}]"),
                    message: format!("cannot parse `{v}`"),
                })
            })
        })
        .collect()
}

/// Parses the body and runs `f` off the async executor.
async fn run<T, F>(body: String, f: F) -> Result<Json<T>, ApiError>
where
    T: Serialize + Send + 'static,
    F: FnOnce(&CurveDocument) -> toric_nurbs::Result<T> + Send + 'static,
{
    let out = tokio::task::spawn_blocking(move || {
        let doc = CurveDocument::parse(&body)?;
        f(&doc)
    })
    .await
    .map_err(|e| ApiError {
        code: "internal_error".into(),
        message: e.to_string(),
        field: None,
    })?;
    Ok(Json(out?))
}

async fn validate(body: String) -> Response {
    run(body, api::validate).await.into_response()
}

async fn sample(Query(q): Params, body: String) -> Response {
    let parsed =
        (|| Ok::<_, ApiError>((param(&q, "t", 1.0)?, param(&q, "count", DEFAULT_SAMPLES)?)))();
    match parsed {
        Ok((t, count)) => run(body, move |d| api::sample(d, t, count))
            .await
            .into_response(),
        Err(e) => e.into_response(),
    }
}

async fn decompose(body: String) -> Response {
    run(body, api::decompose).await.into_response()
}

async fn limit(body: String) -> Response {
    run(body, api::limit).await.into_response()
}

async fn report(Query(q): Params, body: String) -> Response {
    let parsed = (|| {
        Ok::<_, ApiError>((
            schedule(&q)?,
            param(&q, "samples", DEFAULT_SAMPLES)?,
            param(&q, "tol", DEFAULT_TOL)?,
        ))
    })();
    match parsed {
        Ok((s, samples, tol)) => run(body, move |d| api::report(d, &s, samples, tol))
            .await
            .into_response(),
        Err(e) => e.into_response(),
    }
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn cors(mut response: Response) -> Response {
    let h = response.headers_mut();
    h.insert(
        header::ACCESS_CONTROL_ALLOW_ORIGIN,
        HeaderValue::from_static("*"),
    );
    h.insert(
        header::ACCESS_CONTROL_ALLOW_METHODS,
        HeaderValue::from_static("POST, OPTIONS"),
    );
    h.insert(
        header::ACCESS_CONTROL_ALLOW_HEADERS,
        HeaderValue::from_static("content-type"),
    );
    response
}

async fn not_found(method: Method) -> (StatusCode, Json<ApiError>) {
    let e = ApiError {
        code: "not_found".into(),
        message: format!("no such endpoint for {method}"),
        field: None,
    };
    (StatusCode::NOT_FOUND, Json(e))
}

pub fn router() -> Router {
    Router::new()
        .route("/validate", post(validate).options(preflight))
        .route("/sample", post(sample).options(preflight))
        .route("/decompose", post(decompose).options(preflight))
        .route("/limit", post(limit).options(preflight))
        .route("/report", post(report).options(preflight))
        .fallback(not_found)
        .layer(middleware::map_response(cors))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
