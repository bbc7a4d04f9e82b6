"""Deterministic synthetic corpus for tests and demos.

The generated directory holds raw feeds (7,000 tweets, 3,000 Facebook rows,
6,200 of them keyword matches over 30 days), the two domain lists, a 50-entry
gazetteer, dose records, video metadata, a redirect map, and ground-truth
files recorded by construction (URL golden file, location strings).

Targets built into the corpus:
  * mean daily low-credibility fraction near 1.1% on both platforms;
  * on Twitter the summed low-credibility tally beats every single
    high-credibility domain;
  * regional user counts track population;
  * one Facebook day with no posts and one with only zero-share posts.
"""

from __future__ import annotations

import csv
import json
import math
import random
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

from .ingest import DEFAULT_KEYWORDS

SEED = 20201227
START = date(2020, 12, 20)
DAYS = 30
N_TWEETS = 7000
N_FACEBOOK = 3000
N_MATCH_TWITTER = 4340
N_MATCH_FACEBOOK = 1860
FB_EMPTY_DAY = 15
FB_ZERO_SHARE_DAY = 20

LOW_DOMAINS = [
    "imolaoggi.it", "byoblu.it", "databaseitalia.it", "ilprimatonazionale.it",
    "voxnews.info", "stopcensura.info", "radioradio.it", "lantidiplomatico.it",
    "oltre.tv", "visionetv.it", "mittdolcino.com", "scenarieconomici.it",
    "comedonchisciotte.org", "maurizioblondet.it", "ilparagone.it", "lacrunadellago.net",
    "informarexresistere.fr", "jedanews.it", "ilsapereepotere2.blogspot.com",
    "tuttiicriminidegliimmigrati.com", "silenziefalsita.it", "affaritaliani-finti.it",
    "renovatio21.com", "nogeoingegneria.com", "lafucina.it", "terrarealtime.blogspot.com",
]
HIGH_DOMAINS = [
    "ansa.it", "repubblica.it", "corriere.it", "ilfattoquotidiano.it", "open.online",
    "fanpage.it", "ilsole24ore.com", "lastampa.it", "mediaset.it", "rainews.it",
    "ilgiornale.it", "liberoquotidiano.it", "huffingtonpost.it", "today.it", "ilpost.it",
]
OTHER_DOMAINS = [
    "example.org", "news.blogspot.com", "bbc.co.uk", "who.int", "salute.gov.it",
    "wikipedia.org", "twitter.com", "facebook.com", "instagram.com", "change.org",
]

REGIONS = {
    # code: (gazetteer name, approximate resident population at 1 Jan 2021)
    "ABR": ("Abruzzo", 1281012),
    "BAS": ("Basilicata", 545130),
    "CAL": ("Calabria", 1860601),
    "CAM": ("Campania", 5712143),
    "EMR": ("Emilia-Romagna", 4438937),
    "FVG": ("Friuli-Venezia Giulia", 1201510),
    "LAZ": ("Lazio", 5730399),
    "LIG": ("Liguria", 1518495),
    "LOM": ("Lombardia", 9981554),
    "MAR": ("Marche", 1498236),
    "MOL": ("Molise", 294294),
    "PIE": ("Piemonte", 4273210),
    "PUG": ("Puglia", 3933777),
    "SAR": ("Sardegna", 1590044),
    "SIC": ("Sicilia", 4833329),
    "TAA": ("Trentino-Alto Adige", 1077078),
    "TOS": ("Toscana", 3692865),
    "UMB": ("Umbria", 865452),
    "VDA": ("Valle d'Aosta", 123337),
    "VEN": ("Veneto", 4854633),
}
PROVINCES = [
    ("Milano", "LOM"), ("Roma", "LAZ"), ("Napoli", "CAM"), ("Torino", "PIE"), ("Firenze", "TOS"),
    ("Bari", "PUG"), ("Palermo", "SIC"), ("Bologna", "EMR"), ("Venezia", "VEN"), ("Genova", "LIG"),
]
MUNICIPALITIES = PROVINCES + [
    ("Sesto San Giovanni", "LOM"), ("Sesto", "TAA"), ("Paese", "VEN"), ("Forlì", "EMR"),
    ("L'Aquila", "ABR"), ("Reggio Calabria", "CAL"), ("Reggio Emilia", "EMR"),
    ("San Giovanni Rotondo", "PUG"), ("Perugia", "UMB"), ("Cagliari", "SAR"),
]

# Location strings that resolve nowhere.
UNRESOLVED_LOCATIONS = [
    "Mondo", "Terra", "ovunque", "Europa", "romantica", "Londra", "Planet Earth", "casa mia",
    "nel cuore", "Milanese d'adozione", "Berlin", "Sud", "altrove", "Paris, France",
    "lombardo veneto", "🌍", "Italia", "Romagna mia", "Italy", "sul divano",
]

FILLER = (
    "oggi domani governo salute dose dosi ospedale regione campagna covid pfizer astrazeneca "
    "notizie leggete incredibile finalmente medici infermieri anziani prima seconda "
    "settimana ministro speranza arcuri sanita italia europa dati numeri aggiornamento "
    "somministrate consegnate fiale frigoriferi siringhe primula piano scuola lavoro "
    "fiducia paura dubbi scienza ricerca studio effetti collaterali rischio immunita"
).split()
NEAR_MISSES = [
    "vaccinista", "vaccinale", "antivaccino", "vaccinii", "vaccin0", "vaccinazionee",
    "#vaccinoanticovid19", "vaccinati", "vaccinatevi", "provaccino", "#vaccinismo", "vaccinarsii",
]
KEYWORD_FORMS = {
    "vaccinero": ["vaccinerò", "Vaccinerò", "VACCINERÒ", "vaccinero"],
    "iononmivaccino": ["#iononmivaccino", "#IoNonMiVaccino", "iononmivaccino"],
    "iononmivaccinero": ["#iononmivaccinerò", "iononmivaccinero"],
    "novaccinoainovax": ["#novaccinoainovax", "#NoVaccinoAiNoVax"],
    "iononsonounacavia": ["#iononsonounacavia", "#IoNonSonoUnaCavia"],
    "vaccinareh24": ["#vaccinareh24", "vaccinareH24"],
    "vaccini": ["vaccini", "Vaccini", "VACCINI", "vaccini,", "vaccini_covid"],
    "vaccino": ["vaccino", "Vaccino!", "#vaccino", "vaccino?", "(vaccino)"],
}

VIDEO_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-"
N_VIDEOS = 60
N_REMOVED = 10


def _day_weights() -> list[float]:
    weights = []
    for i in range(DAYS):
        d = START + timedelta(days=i)
        w = 1.0 + 0.02 * (DAYS - i)
        if d == date(2020, 12, 27):
            w = 4.0
        elif d == date(2020, 12, 28):
            w = 2.5
        elif date(2021, 1, 1) <= d <= date(2021, 1, 4):
            w = 2.2
        weights.append(w)
    return weights


def _allocate(total: int, weights: list[float]) -> list[int]:
    """Largest-remainder split of ``total`` proportional to ``weights``."""
    s = sum(weights)
    raw = [total * w / s for w in weights]
    base = [math.floor(r) for r in raw]
    rest = total - sum(base)
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:rest]:
        base[i] += 1
    return base


def _zipf(n: int, s: float) -> list[float]:
    return [1.0 / (i + 1) ** s for i in range(n)]


class _Builder:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.golden: dict[str, tuple[str, str]] = {}
        self.redirects: dict[str, str] = {}
        self.videos = self._make_videos()
        self.video_weights = _zipf(N_VIDEOS, 1.0)
        self.low_tw_weights = _zipf(len(LOW_DOMAINS), 1.1)
        # Facebook popularity follows Twitter's with noise.
        self.low_fb_weights = [w * self.rng.uniform(0.5, 1.6) for w in self.low_tw_weights]
        self.high_tw_weights = _zipf(len(HIGH_DOMAINS), 0.45)
        self.high_fb_weights = [w * self.rng.uniform(0.6, 1.5) for w in self.high_tw_weights]

    def _make_videos(self) -> list[str]:
        ids = ["kHGtn_vnrJ8"]
        while len(ids) < N_VIDEOS:
            vid = "".join(self.rng.choice(VIDEO_ALPHABET) for _ in range(11))
            if vid not in ids:
                ids.append(vid)
        return ids

    def news_url(self, domain: str, cls: str) -> str:
        rng = self.rng
        slug = rng.choice(["covid-news", "dosi-arrivate", "effetti-avversi", "campagna", "pfizer", "ema"])
        shape = rng.randrange(7)
        if shape == 0:
            url = f"https://www.{domain}/2021/01/{slug}"
        elif shape == 1:
            url = f"http://{domain}/articolo?id={rng.randrange(5)}"
        elif shape == 2:
            url = f"https://{domain}/{slug}#commenti"
        elif shape == 3:
            url = f"HTTPS://WWW.{domain.upper()}/{slug}"
        elif shape == 4:
            url = f"https://{domain}:443/{slug}"
        elif shape == 5 and domain.count(".") == 1:
            url = f"https://m.{domain}/{slug}"
        else:
            url = f"https://{domain}/{slug}/"
        self.golden[url] = (domain, cls)
        if rng.random() < 0.08:
            short = f"https://t.co/{domain.split('.')[0][:4]}{rng.randrange(3)}"
            if short not in self.redirects:
                self.redirects[short] = url
                self.golden[short] = (domain, cls)
            elif self.redirects[short] != url:
                return url
            return short
        return url

    def other_url(self) -> str:
        rng = self.rng
        r = rng.random()
        if r < 0.1:
            short = f"https://bit.ly/x{rng.randrange(4)}"
            self.golden[short] = ("bit.ly", "unknown")
            return short
        domain = rng.choice(OTHER_DOMAINS)
        url = f"https://www.{domain}/p/{rng.randrange(4)}"
        self.golden[url] = (domain, "unknown")
        return url

    def video_url(self) -> tuple[str, str]:
        rng = self.rng
        vid = rng.choices(self.videos, weights=self.video_weights)[0]
        shape = rng.randrange(5)
        if shape == 0:
            url, dom = f"https://youtu.be/{vid}", "youtu.be"
        elif shape == 1:
            url, dom = f"https://www.youtube.com/embed/{vid}", "youtube.com"
        elif shape == 2:
            url, dom = f"https://m.youtube.com/watch?v={vid}&feature=share", "youtube.com"
        else:
            url, dom = f"https://www.youtube.com/watch?v={vid}", "youtube.com"
        self.golden[url] = (dom, "unknown")
        return url, vid

    def channel_url(self) -> str:
        url = "https://www.youtube.com/channel/UCx" + str(self.rng.randrange(3))
        self.golden[url] = ("youtube.com", "unknown")
        return url

    def text(self, matching: bool) -> str:
        rng = self.rng
        words = rng.sample(FILLER, rng.randint(5, 12))
        if matching:
            kw = rng.choice(DEFAULT_KEYWORDS)
            form = rng.choice(KEYWORD_FORMS.get(kw, [kw, kw.capitalize()]))
            words.insert(rng.randrange(len(words) + 1), form)
        elif rng.random() < 0.6:
            words.insert(rng.randrange(len(words) + 1), rng.choice(NEAR_MISSES))
        return " ".join(words)

    def extra_urls(self, platform: str) -> list[str]:
        """Links that are neither low nor high: other sites, videos, channels."""
        rng = self.rng
        urls = []
        if rng.random() < 0.05:
            urls.append(self.video_url()[0])
        if rng.random() < 0.02:
            urls.append(self.channel_url())
        if rng.random() < 0.08:
            urls.append(self.other_url())
        return urls


def _pick_classes_by_count(rng, n: int, low_rate: float, high_rate: float, carry: list[float]):
    """Per-day low/high post counts with error diffusion across days."""
    carry[0] += n * low_rate
    carry[1] += n * high_rate
    lo, hi = int(carry[0]), int(carry[1])
    carry[0] -= lo
    carry[1] -= hi
    idx = list(range(n))
    rng.shuffle(idx)
    low_set = set(idx[:lo])
    # A few posts cite both kinds of source.
    overlap = 1 if lo and rng.random() < 0.3 else 0
    high_pool = idx[lo - overlap :]
    high_set = set(high_pool[:hi])
    return low_set, high_set


def _pick_classes_by_weight(rng, weights: list[int], low_rate: float, high_rate: float):
    total = sum(weights)
    idx = [i for i in range(len(weights)) if weights[i] > 0]
    rng.shuffle(idx)
    low_set, acc = set(), 0
    target = total * low_rate
    for i in sorted(idx, key=lambda i: weights[i]):
        if acc + weights[i] <= target:
            low_set.add(i)
            acc += weights[i]
        if acc >= target * 0.97:
            break
    high_set, acc = set(), 0
    target = total * high_rate
    for i in idx:
        if i in low_set:
            continue
        if acc + weights[i] <= target:
            high_set.add(i)
            acc += weights[i]
    return low_set, high_set


def _share_count(rng) -> int:
    return max(1, int(rng.lognormvariate(2.3, 1.3)))


def _time_in_day(rng, d: date) -> datetime:
    return datetime(d.year, d.month, d.day, tzinfo=timezone.utc) + timedelta(seconds=rng.randrange(86400))


def _users(rng) -> list[tuple[str, str | None]]:
    """(user_id, location) pairs; located users spread by population."""
    users = []
    codes = sorted(REGIONS)
    pops = [REGIONS[c][1] for c in codes]
    municipalities = {}
    for name, code in MUNICIPALITIES:
        municipalities.setdefault(code, []).append(name)
    for i in range(1400):
        uid = f"u{i:05d}"
        r = rng.random()
        if r < 0.35:
            loc = None
        elif r < 0.50:
            loc = rng.choice(UNRESOLVED_LOCATIONS)
        else:
            code = rng.choices(codes, weights=pops)[0]
            region_name = REGIONS[code][0]
            names = municipalities.get(code, [])
            shape = rng.random()
            if names and shape < 0.55:
                loc = rng.choice(names)
                if rng.random() < 0.3:
                    loc = f"{loc}, {region_name}"
            elif names and shape < 0.65:
                loc = f"vivo a {rng.choice(names)}"
            elif shape < 0.8:
                loc = region_name.upper()
            else:
                loc = f"{region_name}, Italia"
        users.append((uid, loc))
    return users


def generate(out_dir, seed: int = SEED) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    b = _Builder(seed + 1)
    days = [START + timedelta(days=i) for i in range(DAYS)]
    weights = _day_weights()

    users = _users(rng)
    user_weights = _zipf(len(users), 0.6)

    # Twitter
    tw_match = _allocate(N_MATCH_TWITTER, weights)
    tw_other = _allocate(N_TWEETS - N_MATCH_TWITTER, [1.0] * DAYS)
    tweets = []
    carry = [0.0, 0.0]
    for d, n_match, n_other in zip(days, tw_match, tw_other):
        low_set, high_set = _pick_classes_by_count(rng, n_match, 0.0112, 0.0627, carry)
        for j in range(n_match + n_other):
            matching = j < n_match
            urls = []
            if matching and j in low_set:
                urls.append(b.news_url(rng.choices(LOW_DOMAINS, weights=b.low_tw_weights)[0], "low"))
            if matching and j in high_set:
                urls.append(b.news_url(rng.choices(HIGH_DOMAINS, weights=b.high_tw_weights)[0], "high"))
            if not matching and rng.random() < 0.1:
                urls.append(b.news_url(rng.choice(LOW_DOMAINS + HIGH_DOMAINS), "?"))
            urls.extend(b.extra_urls("twitter"))
            uid, loc = rng.choices(users, weights=user_weights)[0]
            tweets.append((_time_in_day(rng, d), b.text(matching), uid, loc, urls))
    tweets.sort(key=lambda t: t[0])

    # A few users moved: their last tweets carry a different location.
    tw_lines = []
    for i, (ts, text, uid, loc, urls) in enumerate(tweets):
        tid = str(1340000000000000000 + i * 7919)
        if loc is not None and ts.date() >= date(2021, 1, 15) and int(uid[1:]) % 37 == 0:
            loc = "Cagliari"
        record = {
            "id": tid,
            "created_at": ts.strftime("%a %b %d %H:%M:%S +0000 %Y") if i % 5 == 0 else ts.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "text": text,
            "user": {"id": uid, "location": loc or ""},
        }
        if i % 4 == 0:
            # Legacy shape: links only inside the text.
            if urls:
                record["text"] = text + " " + " ".join(urls)
        else:
            record["entities"] = {"urls": [{"url": f"https://t.co/s{i}", "expanded_url": u} for u in urls]}
        tw_lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    (out / "twitter.jsonl").write_text("\n".join(tw_lines) + "\n", encoding="utf-8")

    # Facebook
    fb_weights = list(weights)
    fb_weights[FB_EMPTY_DAY] = 0.0
    fb_match = _allocate(N_MATCH_FACEBOOK, fb_weights)
    fb_other = _allocate(N_FACEBOOK - N_MATCH_FACEBOOK, [1.0] * DAYS)
    fb_rows = []
    accounts = [f"page{i:04d}" for i in range(400)]
    for di, (d, n_match, n_other) in enumerate(zip(days, fb_match, fb_other)):
        if di == FB_ZERO_SHARE_DAY:
            shares = [0] * n_match
        else:
            shares = [_share_count(rng) for _ in range(n_match)]
        low_set, high_set = _pick_classes_by_weight(rng, shares, 0.0122, 0.1420)
        for j in range(n_match + n_other):
            matching = j < n_match
            urls = []
            if matching and j in low_set:
                urls.append(b.news_url(rng.choices(LOW_DOMAINS, weights=b.low_fb_weights)[0], "low"))
            if matching and j in high_set:
                urls.append(b.news_url(rng.choices(HIGH_DOMAINS, weights=b.high_fb_weights)[0], "high"))
            if not matching and rng.random() < 0.1:
                urls.append(b.news_url(rng.choice(LOW_DOMAINS + HIGH_DOMAINS), "?"))
            urls.extend(b.extra_urls("facebook"))
            share = shares[j] if matching else _share_count(rng)
            share_text = "" if share == 0 and rng.random() < 0.5 else str(share)
            link = urls[0] if urls else ""
            message = b.text(matching)
            if len(urls) > 1:
                message += " " + " ".join(urls[1:])
            fb_rows.append((_time_in_day(rng, d), message, link, share_text, rng.choice(accounts)))
    fb_rows.sort(key=lambda r: r[0])
    with open(out / "facebook.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["post_id", "date", "message", "link", "share_count", "account_id"])
        for i, (ts, message, link, share, account) in enumerate(fb_rows):
            w.writerow([f"fb{i:06d}", ts.strftime("%Y-%m-%d %H:%M:%S"), message, link, share, account])

    # Golden URL file: "?" entries were drawn from the lists at random, resolve them.
    low_set_d, high_set_d = set(LOW_DOMAINS), set(HIGH_DOMAINS)
    with open(out / "url_golden.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["url", "canonical_domain", "class"])
        for url in sorted(b.golden):
            domain, cls = b.golden[url]
            if cls == "?":
                cls = "low" if domain in low_set_d else "high" if domain in high_set_d else "unknown"
            w.writerow([url, domain, cls])

    with open(out / "redirects.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["short_url", "expanded_url"])
        for short in sorted(b.redirects):
            w.writerow([short, b.redirects[short]])

    (out / "low.txt").write_text(
        "# low-credibility domains (synthetic list)\n" + "\n".join(LOW_DOMAINS) + "\n", encoding="utf-8"
    )
    (out / "high.txt").write_text(
        "# high-credibility domains (synthetic list)\n" + "\n".join(HIGH_DOMAINS) + "\n", encoding="utf-8"
    )
    keywords = ["vaccinerò" if kw == "vaccinero" else kw for kw in DEFAULT_KEYWORDS]
    (out / "keywords.txt").write_text("\n".join(keywords) + "\n", encoding="utf-8")

    with open(out / "gazetteer.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "kind", "region_code", "population"])
        for code in sorted(REGIONS):
            name, pop = REGIONS[code]
            w.writerow([name, "region", code, pop])
        for name, code in PROVINCES:
            w.writerow([name, "province", code, ""])
        for name, code in MUNICIPALITIES:
            w.writerow([name, "municipality", code, ""])

    with open(out / "doses.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "region_code", "doses_administered"])
        for i, d in enumerate(days):
            if d < date(2020, 12, 27):
                continue
            ramp = min(1.0, (i - 6) / 14)
            for code in sorted(REGIONS):
                pop = REGIONS[code][1]
                rate = 0.0011 * ramp * (0.6 if code == "LOM" else 1.0) * rng.uniform(0.7, 1.3)
                n = int(pop * rate) if d != date(2020, 12, 27) else int(pop * 0.00002)
                if code == "TAA":
                    w.writerow([d.isoformat(), "PAB", n // 2])
                    w.writerow([d.isoformat(), "PAT", n - n // 2])
                else:
                    w.writerow([d.isoformat(), code, n])

    removed = set(b.videos[-N_REMOVED:])
    with open(out / "video_metadata.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["video_id", "title", "channel_id", "view_count"])
        for i, vid in enumerate(b.videos):
            if vid in removed:
                continue
            title = (
                "IL PARERE DEL PREMIO NOBEL LUC MONTAGNIER SULLA VACCINAZIONE ANTI-COVID [VIDEO IN ITALIANO]"
                if vid == "kHGtn_vnrJ8"
                else f"Video sui vaccini n. {i}"
            )
            w.writerow([vid, title, f"UC{i % 23:04d}", 450000 if i == 0 else rng.randrange(100, 200000)])

    locations = sorted({loc for _, loc in users if loc})
    extra = ["Roma, Lazio", "vivo a Paese", "Sesto San Giovanni", "  FORLÌ  ", "Reggio Emilia, Emilia-Romagna",
             "Milano - Lombardia", "romantica Roma", "Bari 🇮🇹 Puglia", "", "Sesto", "L'AQUILA",
             "Napoli / Campania / Italia", "tra Torino e Milano", "San Giovanni Rotondo (FG)"]
    pool = list(dict.fromkeys(extra + locations))
    while len(pool) < 200:
        a, c = rng.choice(pool), rng.choice(UNRESOLVED_LOCATIONS + [m for m, _ in MUNICIPALITIES])
        cand = f"{a} {c}".strip()
        if cand not in pool:
            pool.append(cand)
    (out / "locations.txt").write_text("\n".join(pool[:200]) + "\n", encoding="utf-8")

    _write_samples(out, random.Random(seed + 2))
    return out


def _write_samples(out: Path, rng: random.Random) -> None:
    """Small feeds for parser tests: 1,000 tweets with 3 bad records, 500 rows summing to 12,345 shares."""
    lines = []
    for i in range(1000):
        rec = {
            "id": str(i + 1),
            "created_at": f"2021-01-{1 + i % 28:02d}T{i % 24:02d}:00:00Z",
            "text": f"post {i} sul vaccino",
            "user": {"id": f"s{i % 90}", "location": "Milano" if i % 3 else ""},
            "entities": {"urls": []},
        }
        if i == 100:
            del rec["created_at"]
        elif i == 500:
            rec["user"] = {"location": "Roma"}
        line = json.dumps(rec, sort_keys=True)
        if i == 900:
            line = line[:-5]
        lines.append(line)
    (out / "twitter_sample_1000.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    shares = [rng.randrange(0, 50) for _ in range(499)]
    shares.append(12345 - sum(shares))
    assert shares[-1] >= 0
    with open(out / "facebook_sample_500.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "message", "link", "share_count", "account_id"])
        for i, s in enumerate(shares):
            w.writerow([f"2021-01-{1 + i % 28:02d}", f"messaggio {i} vaccini", "", s, f"page{i % 40}"])
