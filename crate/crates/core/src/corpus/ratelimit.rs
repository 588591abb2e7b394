use std::time::{Duration, Instant};

/// Requests-per-second override for the review fetcher.
pub const RATE_LIMIT_ENV: &str = "SEMNET_RATE_LIMIT_RPS";

/// Token bucket with a capacity of one request.
#[derive(Debug, Clone)]
pub struct RateLimiter {
    interval: Duration,
    next_free: Option<Instant>,
}

impl RateLimiter {
    /// `rps` must be positive and finite; anything else disables limiting.
    pub fn per_second(rps: f64) -> Self {
        let interval = if rps.is_finite() && rps > 0.0 {
            Duration::from_secs_f64(1.0 / rps)
        } else {
            Duration::ZERO
        };
        Self {
            interval,
            next_free: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::per_second(f64::INFINITY)
    }

    /// Reads [`RATE_LIMIT_ENV`], falling back to 1 request/second.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(RATE_LIMIT_ENV) {
            Ok(raw) => {
                let rps: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| format!("{RATE_LIMIT_ENV}={raw:?} is not a number"))?;
                if !(rps > 0.0) {
                    return Err(format!("{RATE_LIMIT_ENV} must be positive, got {rps}"));
                }
                Ok(Self::per_second(rps))
            }
            Err(_) => Ok(Self::per_second(1.0)),
        }
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Blocks until a token is available, then consumes it.
    pub fn acquire(&mut self) {
        if self.interval.is_zero() {
            return;
        }
        let now = Instant::now();
        if let Some(at) = self.next_free {
            if at > now {
                std::thread::sleep(at - now);
            }
        }
        self.next_free = Some(Instant::now() + self.interval);
    }
}
