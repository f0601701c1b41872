#!/usr/bin/env python3
"""Regenerates tests/fixtures/mini: prices, recorded source responses and a pipeline config.

Three tickers, 30 calendar days, four channels. A hidden daily mood drives both the return and the
tone of that day's documents, so correlations are clearly non-zero. Output is fully determined by
SEED; rerunning rewrites identical files.
"""
import json
import math
import os
import random
import sys
from datetime import date, timedelta

SEED = 20210104
TICKERS = ["DJIA", "GS", "MSFT"]
NAMES = {"DJIA": "Dow Jones", "GS": "Goldman Sachs", "MSFT": "Microsoft"}
START = date(2021, 1, 4)
DAYS = 30
END = START + timedelta(days=DAYS - 1)
BASE_PRICE = {"DJIA": 30200.0, "GS": 265.0, "MSFT": 217.0}

POS_TWEETS = [
    "So happy with ${t} today, great gains and strong momentum",
    "Thrilled and optimistic about ${t}, excellent quarter",
    "${t} looking bullish, delighted with this rebound",
    "Feeling confident about ${t}, impressive progress",
    "Wow ${t} is on fire, ecstatic about the upturn",
]
NEG_TWEETS = [
    "Really worried about ${t}, terrible losses and gloomy outlook",
    "Sadly ${t} slumped again, depressed by this decline",
    "Frightened by the ${t} crash, panicked selling everywhere",
    "Angry and frustrated with ${t}, worst week in months",
    "${t} is so weak, disgusted by this downgrade",
]
NEUTRAL_TWEETS = ["Watching ${t} into the close", "Anyone holding ${t} over the weekend?"]

POS_HEADLINES = [
    "{n} climbs as investors cheer strong earnings",
    "{n} shares gain after upbeat guidance",
    "{n} posts record profit and upgrades outlook",
    "{n} rally continues on improved demand",
]
NEG_HEADLINES = [
    "{n} slides as recession fears deepen",
    "{n} shares fall after disappointing results",
    "{n} hit by lawsuit and weak guidance",
    "{n} declines amid market turmoil",
]
POS_TRAIL = ["Analysts see further opportunity.", "Momentum looks favorable.", "The outlook improved."]
NEG_TRAIL = ["Analysts flag concern over losses.", "The slowdown may worsen.", "Investors fear a downturn."]

POS_RADIO = [
    "good morning the {n} picture is better today with solid gains across the board",
    "in market news {n} advances as traders welcome the strong numbers",
]
NEG_RADIO = [
    "in market news {n} drops as traders fear a crisis in lending",
    "the {n} session was difficult with heavy losses reported",
]

TWITTER_URL = "https://api.twitter.example/2/tweets/search/recent"
GUARDIAN_URL = "https://content.guardianapis.example/search"
RADIO_URL = "https://transcripts.radio.example/v1/segments"
AV_URL = "https://www.alphavantage.example/query"


def pick(rng, mood, pos, neg, neutral=None, neutral_p=0.0):
    if neutral and rng.random() < neutral_p:
        return rng.choice(neutral)
    p_pos = 1.0 / (1.0 + math.exp(-1.6 * mood))
    return rng.choice(pos) if rng.random() < p_pos else rng.choice(neg)


def days():
    return [START + timedelta(days=i) for i in range(DAYS)]


def windows(n):
    d = START
    while d <= END:
        yield d, min(END, d + timedelta(days=n - 1))
        d += timedelta(days=n)


def line(url, body, status=200):
    return json.dumps({"url": url, "status": status, "body": body}, sort_keys=False)


def main(out_dir):
    rng = random.Random(SEED)
    os.makedirs(os.path.join(out_dir, "responses"), exist_ok=True)

    mood = {t: {d: rng.gauss(0.0, 1.0) for d in days()} for t in TICKERS}

    # Prices: weekdays from three days before START through a week after END.
    price_rows = []
    for t in TICKERS:
        close = BASE_PRICE[t]
        d = START - timedelta(days=3)
        while d <= END + timedelta(days=7):
            if d.weekday() < 5:
                m = mood[t].get(d, 0.0)
                ret = 0.006 * m + 0.008 * rng.gauss(0.0, 1.0)
                open_ = close
                close = round(close * (1.0 + ret), 2)
                high = round(max(open_, close) * (1.0 + 0.004 * rng.random()), 2)
                low = round(min(open_, close) * (1.0 - 0.004 * rng.random()), 2)
                vol = rng.randint(1_000_000, 5_000_000)
                price_rows.append(f"{t},{d.isoformat()},{open_:.2f},{high:.2f},{low:.2f},{close:.2f},{vol}")
            d += timedelta(days=1)
    with open(os.path.join(out_dir, "prices.csv"), "w") as f:
        f.write("ticker,date,open,high,low,close,volume\n")
        f.write("\n".join(price_rows) + "\n")

    # Twitter: one request per day, generic layout with engagement.
    tw = []
    for t in TICKERS:
        for d in days():
            docs = []
            for k in range(rng.randint(2, 5)):
                text = pick(rng, mood[t][d], POS_TWEETS, NEG_TWEETS, NEUTRAL_TWEETS, 0.15).replace("{t}", t)
                docs.append({
                    "id": f"tw-{t}-{d.isoformat()}-{k}",
                    "date": f"{d.isoformat()}T{rng.randint(9, 20):02d}:{rng.randint(0, 59):02d}:00Z",
                    "text": text,
                    "likes": rng.randint(0, 200),
                    "retweets": rng.randint(0, 50),
                    "replies": rng.randint(0, 20),
                })
            url = f"{TWITTER_URL}?query=%24{t}&start_time={d.isoformat()}&end_time={d.isoformat()}&token=REDACTED"
            tw.append(line(url, {"documents": docs}))

    # News archive: Guardian layout, weekly windows, assigned to tickers by tag keywords. Each page
    # also carries one article tagged with another company, which the keyword filter drops.
    gd = []
    for t in TICKERS:
        for lo, hi in windows(7):
            results = []
            d = lo
            while d <= hi:
                if rng.random() < 0.8:
                    results.append({
                        "id": f"business/{d.isoformat()}/{t.lower()}-{len(results)}",
                        "webPublicationDate": f"{d.isoformat()}T{rng.randint(6, 22):02d}:00:00Z",
                        "webTitle": pick(rng, mood[t][d], POS_HEADLINES, NEG_HEADLINES).format(n=NAMES[t]),
                        "fields": {"trailText": pick(rng, mood[t][d], POS_TRAIL, NEG_TRAIL)},
                        "tags": [{"webTitle": NAMES[t]}, {"webTitle": "Business"}],
                    })
                d += timedelta(days=1)
            other = rng.choice([x for x in TICKERS if x != t])
            results.append({
                "id": f"business/{lo.isoformat()}/{other.lower()}-offtopic",
                "webPublicationDate": f"{lo.isoformat()}T12:00:00Z",
                "webTitle": f"{NAMES[other]} weak quarter disappoints",
                "tags": [{"webTitle": NAMES[other]}],
            })
            url = f"{GUARDIAN_URL}?q={t}&from-date={lo.isoformat()}&to-date={hi.isoformat()}&api-key=REDACTED"
            gd.append(line(url, {"response": {"status": "ok", "results": results}}))

    # Radio transcripts: daily, weekdays only (weekends come back empty, logged as sparse).
    rd = []
    for t in TICKERS:
        for d in days():
            docs = []
            if d.weekday() < 5:
                docs.append({
                    "id": f"radio-{t}-{d.isoformat()}",
                    "date": d.isoformat(),
                    "text": pick(rng, mood[t][d], POS_RADIO, NEG_RADIO).format(n=NAMES[t]),
                })
            rd.append(line(f"{RADIO_URL}?symbol={t}&date={d.isoformat()}&key=REDACTED", docs))

    # News API: Alpha Vantage layout, one request covers the whole range.
    av = []
    for t in TICKERS:
        feed = []
        for d in days():
            for k in range(rng.randint(0, 2)):
                feed.append({
                    "title": pick(rng, mood[t][d], POS_HEADLINES, NEG_HEADLINES).format(n=NAMES[t]),
                    "summary": pick(rng, mood[t][d], POS_TRAIL, NEG_TRAIL),
                    "url": f"https://news.example/{t.lower()}/{d.isoformat()}/{k}",
                    "time_published": d.strftime("%Y%m%d") + f"T{rng.randint(0, 23):02d}0000",
                })
        url = (f"{AV_URL}?function=NEWS_SENTIMENT&tickers={t}&time_from={START.isoformat()}T0000"
               f"&time_to={END.isoformat()}T2359&apikey=REDACTED")
        av.append(line(url, {"items": str(len(feed)), "feed": feed}))

    for name, lines in [("twitter", tw), ("guardian", gd), ("radio", rd), ("alpha_vantage", av)]:
        with open(os.path.join(out_dir, "responses", name + ".jsonl"), "w") as f:
            f.write("\n".join(lines) + "\n")

    fast = {"min_delay": 0.001, "max_delay": 0.002}
    config = {
        "data_dir": "../../../data",
        "prices": "prices.csv",
        "corpus": "corpus",
        "out": "out",
        "tickers": TICKERS,
        "from": START.isoformat(),
        "to": END.isoformat(),
        "seed": 7,
        "sources": [
            {"id": "twitter", "channel": "twitter", "format": "generic", "endpoint": TWITTER_URL,
             "query_template": "?query=%24{ticker}&start_time={from}&end_time={to}&token={token}",
             "auth_env": "STOCKSENT_TWITTER_TOKEN", "fixture": "responses/twitter.jsonl",
             "identities": [{"user_agent": "stocksent/1.0 (a)"}, {"user_agent": "stocksent/1.0 (b)"}],
             "window_days": 1, **fast},
            {"id": "guardian", "channel": "news_archive", "format": "guardian", "endpoint": GUARDIAN_URL,
             "query_template": "?q={ticker}&from-date={from}&to-date={to}&api-key={token}",
             "auth_env": "GUARDIAN_API_KEY", "fixture": "responses/guardian.jsonl",
             "window_days": 7, "keyword_match": True, **fast},
            {"id": "radio", "channel": "radio_transcript", "format": "generic", "endpoint": RADIO_URL,
             "query_template": "?symbol={ticker}&date={from}&key={token}",
             "auth_env": "RADIO_API_KEY", "fixture": "responses/radio.jsonl", "window_days": 1, **fast},
            {"id": "alpha_vantage", "channel": "news_api", "format": "alpha_vantage", "endpoint": AV_URL,
             "query_template": "?function=NEWS_SENTIMENT&tickers={ticker}&time_from={from}T0000"
                               "&time_to={to}T2359&apikey={token}",
             "auth_env": "ALPHAVANTAGE_API_KEY", "fixture": "responses/alpha_vantage.jsonl",
             "window_days": DAYS, **fast},
        ],
    }
    with open(os.path.join(out_dir, "config.json"), "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "tests", "fixtures", "mini"))
