//! Regenerates the bundled sample under `data/sample/`.
//!
//! The sample has 24 events. The five 2024 World Series rows and the viewer
//! counts of the three Super Bowl rows (XLVI to XLVIII) come from published
//! tables, and those Super Bowl fixtures reproduce the published post,
//! comment and score totals exactly. Every other number, and all post text,
//! is synthetic.
//!
//! ```text
//! cargo run --example generate_sample [OUT_DIR]
//! ```

use std::path::PathBuf;

use buzzcast::ingest::{
    event_slug, write_posts_fixture, FetchWindow, RawPost, DEFAULT_WINDOW_HOURS,
};
use chrono::DateTime;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Event {
    name: &'static str,
    sport: &'static str,
    year: i32,
    teams: &'static [&'static str],
    start: &'static str,
    subreddit: &'static str,
    viewers: f64,
    /// Exact (posts, comments, scores) totals to reproduce.
    totals: Option<(usize, u64, i64)>,
}

const fn ev(
    name: &'static str,
    sport: &'static str,
    year: i32,
    teams: &'static [&'static str],
    start: &'static str,
    subreddit: &'static str,
    viewers: f64,
) -> Event {
    Event {
        name,
        sport,
        year,
        teams,
        start,
        subreddit,
        viewers,
        totals: None,
    }
}

const EVENTS: [Event; 24] = [
    // published
    ev(
        "WS G1 2024",
        "World_Series",
        2024,
        &["LAD", "NYY"],
        "2024-10-25T17:11-07:00",
        "baseball",
        14.16,
    ),
    ev(
        "WS G2 2024",
        "World_Series",
        2024,
        &["LAD", "NYY"],
        "2024-10-26T17:15-07:00",
        "baseball",
        13.71,
    ),
    ev(
        "WS G3 2024",
        "World_Series",
        2024,
        &["LAD", "NYY"],
        "2024-10-28T17:17-07:00",
        "baseball",
        13.21,
    ),
    ev(
        "WS G4 2024",
        "World_Series",
        2024,
        &["LAD", "NYY"],
        "2024-10-29T17:08-07:00",
        "baseball",
        16.28,
    ),
    ev(
        "WS G5 2024",
        "World_Series",
        2024,
        &["LAD", "NYY"],
        "2024-10-30T17:08-07:00",
        "baseball",
        18.15,
    ),
    Event {
        totals: Some((98, 2067, 1277)),
        ..ev(
            "SB XLVI",
            "Super_Bowl",
            2012,
            &["NYG", "NEP"],
            "2012-02-05T18:30-05:00",
            "nfl",
            111.35,
        )
    },
    Event {
        totals: Some((107, 2099, 4923)),
        ..ev(
            "SB XLVII",
            "Super_Bowl",
            2013,
            &["BAL", "SF"],
            "2013-02-03T17:30-06:00",
            "nfl",
            108.69,
        )
    },
    Event {
        totals: Some((160, 2237, 3077)),
        ..ev(
            "SB XLVIII",
            "Super_Bowl",
            2014,
            &["SEA", "DEN"],
            "2014-02-02T18:30-05:00",
            "nfl",
            112.19,
        )
    },
    // synthetic fill
    Event {
        totals: Some((131, 2188, 3410)),
        ..ev(
            "SB XLIX",
            "Super_Bowl",
            2015,
            &["NEP", "SEA"],
            "2015-02-01T18:30-05:00",
            "nfl",
            114.4,
        )
    },
    Event {
        totals: Some((118, 2120, 2650)),
        ..ev(
            "SB 50",
            "Super_Bowl",
            2016,
            &["DEN", "CAR"],
            "2016-02-07T18:30-05:00",
            "nfl",
            111.9,
        )
    },
    ev(
        "NBA G1 2023",
        "NBA_Finals",
        2023,
        &["DEN", "MIA"],
        "2023-06-01T20:30-04:00",
        "nba",
        11.6,
    ),
    ev(
        "NBA G2 2023",
        "NBA_Finals",
        2023,
        &["DEN", "MIA"],
        "2023-06-04T20:00-04:00",
        "nba",
        11.9,
    ),
    ev(
        "NBA G3 2023",
        "NBA_Finals",
        2023,
        &["DEN", "MIA"],
        "2023-06-07T20:30-04:00",
        "nba",
        11.2,
    ),
    ev(
        "NBA G4 2023",
        "NBA_Finals",
        2023,
        &["DEN", "MIA"],
        "2023-06-09T20:30-04:00",
        "nba",
        10.9,
    ),
    ev(
        "NBA G5 2023",
        "NBA_Finals",
        2023,
        &["DEN", "MIA"],
        "2023-06-12T20:30-04:00",
        "nba",
        13.1,
    ),
    ev(
        "SC G1 2023",
        "Stanley_Cup",
        2023,
        &["VGK", "FLA"],
        "2023-06-03T20:00-04:00",
        "hockey",
        2.6,
    ),
    ev(
        "SC G2 2023",
        "Stanley_Cup",
        2023,
        &["VGK", "FLA"],
        "2023-06-05T20:00-04:00",
        "hockey",
        2.5,
    ),
    ev(
        "SC G3 2023",
        "Stanley_Cup",
        2023,
        &["VGK", "FLA"],
        "2023-06-08T20:00-04:00",
        "hockey",
        2.7,
    ),
    ev(
        "SC G4 2023",
        "Stanley_Cup",
        2023,
        &["VGK", "FLA"],
        "2023-06-10T20:00-04:00",
        "hockey",
        2.4,
    ),
    ev(
        "SC G5 2023",
        "Stanley_Cup",
        2023,
        &["VGK", "FLA"],
        "2023-06-13T20:00-04:00",
        "hockey",
        3.7,
    ),
    ev(
        "MLS Cup 2021",
        "MLS_Cup",
        2021,
        &["NYC", "POR"],
        "2021-12-11T13:00-05:00",
        "MLS",
        1.4,
    ),
    ev(
        "MLS Cup 2022",
        "MLS_Cup",
        2022,
        &["LAFC", "PHI"],
        "2022-11-05T16:00-04:00",
        "MLS",
        2.6,
    ),
    ev(
        "MLS Cup 2023",
        "MLS_Cup",
        2023,
        &["CLB", "LAFC"],
        "2023-12-09T16:00-05:00",
        "MLS",
        1.8,
    ),
    ev(
        "MLS Cup 2024",
        "MLS_Cup",
        2024,
        &["LAG", "NYRB"],
        "2024-12-07T18:00-05:00",
        "MLS",
        2.0,
    ),
];

const TEMPLATES: [&str; 24] = [
    "{title} predictions thread: {team} in 6",
    "{team} looking great heading into the {title}",
    "I can't believe {team} made it this far",
    "Terrible officiating again, {team} fans are furious",
    "GAME DAY!!! Let's go {team}",
    "Who do you have winning the {title}?",
    "{team} defense is honestly not good enough",
    "What an amazing season for {team}",
    "Worst take I have read all week about {team}",
    "{title} tickets are absurdly expensive this year",
    "Really excited for tonight, {team} is going to win",
    "{team} injury report looks bad",
    "This {title} could be the best one in years",
    "Nobody is talking about how dominant {team} has been",
    "{team} fans, how are you feeling?",
    "Sad to see {team} struggle like this",
    "Incredible atmosphere outside the stadium before the {title}",
    "Official {title} pre-game discussion",
    "I hate how the media covers {team}",
    "{team} have been so fun to watch",
    "Is {team} overrated?",
    "Beautiful weather for the {title}!",
    "{team} never disappoint",
    "Pretty nervous about this one, not gonna lie",
];

const BODIES: [&str; 8] = [
    "",
    "",
    "Thoughts?",
    "Honestly the best matchup we could have asked for.",
    "Not confident at all. The bullpen has been awful.",
    "[removed]",
    "Love this team so much, win or lose.",
    "Discuss.",
];

fn epoch(s: &str) -> i64 {
    DateTime::parse_from_str(s, "%Y-%m-%dT%H:%M%:z")
        .expect("valid start time")
        .timestamp()
}

/// `n` non-negative integers summing to `total`, randomly weighted.
fn split_total(rng: &mut ChaCha8Rng, n: usize, total: i64) -> Vec<i64> {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen::<f64>().powi(2) + 0.05).collect();
    let sum: f64 = weights.iter().sum();
    let mut parts: Vec<i64> = weights
        .iter()
        .map(|w| (total as f64 * w / sum).floor() as i64)
        .collect();
    let mut rest = total - parts.iter().sum::<i64>();
    let mut i = 0;
    while rest > 0 {
        parts[i % n] += 1;
        rest -= 1;
        i += 7;
    }
    parts
}

struct Gen {
    rng: ChaCha8Rng,
    next_id: u64,
}

impl Gen {
    fn id(&mut self) -> String {
        self.next_id += 1;
        format!("s{:05}", self.next_id)
    }

    fn post(&mut self, e: &Event, created_utc: i64, subreddit: &str) -> RawPost {
        let team = e.teams[self.rng.gen_range(0..e.teams.len())];
        let title = TEMPLATES[self.rng.gen_range(0..TEMPLATES.len())]
            .replace("{team}", team)
            .replace("{title}", title_of(e.sport));
        let body = BODIES[self.rng.gen_range(0..BODIES.len())].to_string();
        RawPost {
            id: self.id(),
            title,
            body,
            score: self.rng.gen_range(-3..60),
            num_comments: self.rng.gen_range(0..40),
            created_utc,
            subreddit: subreddit.to_string(),
        }
    }

    fn event_posts(&mut self, e: &Event) -> Vec<RawPost> {
        let start = epoch(e.start);
        let window = FetchWindow::preceding(start, DEFAULT_WINDOW_HOURS).expect("valid window");
        let span = (window.before - window.after) as f64;
        let n = match e.totals {
            Some((n, _, _)) => n,
            None => (12.0 + 1.6 * e.viewers + self.rng.gen_range(-3.0..3.0)).round() as usize,
        };
        let mut posts: Vec<RawPost> = (0..n)
            .map(|_| {
                // denser close to kickoff
                let back = (span * self.rng.gen::<f64>().powf(1.6)) as i64;
                let t = (window.before - 1 - back).max(window.after);
                self.post(e, t, e.subreddit)
            })
            .collect();
        if let Some((_, comments, scores)) = e.totals {
            let c = split_total(&mut self.rng, n, comments as i64);
            // shifted down so a few posts end up net-downvoted
            let s = split_total(&mut self.rng, n, scores + 2 * n as i64);
            for (p, (c, s)) in posts.iter_mut().zip(c.into_iter().zip(s)) {
                p.num_comments = c as u64;
                p.score = s - 2;
            }
        }
        posts.sort_by(|a, b| b.created_utc.cmp(&a.created_utc).then(a.id.cmp(&b.id)));
        if n > 110 {
            // a run of equal timestamps straddling the first page boundary
            let t = posts[95].created_utc;
            for p in &mut posts[95..106] {
                p.created_utc = t;
            }
            // edges of the window
            posts[0].created_utc = window.before - 1;
            posts[n - 1].created_utc = window.after;
        }
        posts
    }

    /// Records the archive holds but the event's window must exclude.
    fn distractors(&mut self, e: &Event, posts: &[RawPost]) -> Vec<RawPost> {
        let start = epoch(e.start);
        let window = FetchWindow::preceding(start, DEFAULT_WINDOW_HOURS).expect("valid window");
        let mut out = vec![
            self.post(e, window.before, e.subreddit),
            self.post(e, window.after - 1, e.subreddit),
            self.post(e, window.after - 86_400, e.subreddit),
            self.post(e, window.before - 3_600, "sports"),
            self.post(e, window.before - 7_200, "sports"),
        ];
        // the archive occasionally returns a record twice
        if let Some(p) = posts.get(posts.len() / 2) {
            out.push(p.clone());
        }
        out
    }
}

fn title_of(sport: &str) -> &'static str {
    match sport {
        "World_Series" => "World Series",
        "Super_Bowl" => "Super Bowl",
        "NBA_Finals" => "NBA Finals",
        "Stanley_Cup" => "Stanley Cup",
        _ => "MLS Cup",
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample"));
    let archive = out.join("archive");
    std::fs::create_dir_all(&archive)?;

    let mut gen = Gen {
        rng: ChaCha8Rng::seed_from_u64(2024),
        next_id: 0,
    };
    let mut csv = String::from("name,sport,year,teams,start_time,subreddit,avg_viewers_millions\n");
    for e in &EVENTS {
        let mut posts = gen.event_posts(e);
        let extra = gen.distractors(e, &posts);
        posts.extend(extra);
        write_posts_fixture(archive.join(format!("{}.json", event_slug(e.name))), &posts)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.name,
            e.sport,
            e.year,
            e.teams.join(";"),
            e.start,
            e.subreddit,
            e.viewers
        ));
    }
    std::fs::write(out.join("events.csv"), csv)?;
    println!("wrote {} events to {}", EVENTS.len(), out.display());
    Ok(())
}
