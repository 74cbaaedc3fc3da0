#!/usr/bin/env python3
"""Regenerates the bundled data/ tables.

Format lists are popularity-ordered (the simulator biases endowment draws
toward the head of each list).  Compatibility grids follow a head/torso/tail
density profile: the ten most popular formats are each rendered by most but
not all applications (institutions therefore disagree about the best
migration target, which is what spreads migration routes), the next twenty
render in about half the applications, the long tail keeps one to three
applications alive.  Every application renders at least three head formats,
so any institution with software can always reach a low-risk destination.
Columns are the per-type application catalog in loader order: windows list
first, then apple, then linux, first occurrence wins.  Deterministic: fixed
PRNG seed, fixed input lists.
"""

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"

FORMATS = {
    "audio": """wav flac mp3 aac ogg opus m4a aiff wma alac
        amr au mid ra voc snd gsm dss dvf msv ape mpc tta wv shn spx caf oga
        act aa aax awb dct gym ivs m4p mmf nmf nsf rf64 sln tak vox xwma
        brstm bwf w64 mka atrac dff""",
    "image": """png jpeg gif tiff bmp webp svg heif avif ico
        psd xcf cr2 nef arw dng orf rw2 pef srw jp2 jxl ppm pgm pbm hdr exr
        tga dds pcx wmf emf cgm djvu fits sgi ras xbm xpm miff mng apng jbig
        wbmp flif bpg qoi pict koala ilbm""",
    "text": """txt pdf docx odt rtf html xml md tex epub
        doc wpd wps pages abw latex sxw uot fodt docm dotx xps oxps mobi azw
        azw3 fb2 lit prc ps eps dvi rst adoc org wiki creole textile troff
        man info texi nfo ans asc sgml chm hlp uof amigaguide""",
    "video": """mp4 mkv webm avi mov wmv flv mpg m4v ogv
        3gp 3g2 vob ts mts m2ts divx xvid rm rmvb asf f4v swf dv mxf gxf
        lxf r3d braw ari cine dpx yuv y4m ivf nut nsv roq smk bik thp vp6
        h261 h263 drc evo k3g wtv amv fli""",
}

APPS = {
    ("windows", "audio"): """audacity winamp foobar2000 wmplayer vlc ffmpeg
        soundforge goldwave reaper audition mediamonkey switch""",
    ("apple", "audio"): """quicktime itunes audacity vlc ffmpeg logicpro
        garageband fission amadeus twistedwave djay xld""",
    ("linux", "audio"): """audacity vlc ffmpeg sox mplayer rhythmbox amarok
        ardour xmms clementine deadbeef mpv""",
    ("windows", "image"): """photoshop paintnet irfanview gimp imagemagick
        xnview faststone inkscape paintshoppro acdsee corel photoscape""",
    ("apple", "image"): """preview acorn gimp imagemagick pixelmator
        affinity graphicconverter inkscape seashore sketch photos xee""",
    ("linux", "image"): """gimp imagemagick inkscape mypaint eog gwenview
        feh darktable rawtherapee geeqie display xv""",
    ("windows", "text"): """word wordpad notepad libreoffice acrobat
        sumatrapdf calibre foxit wordperfect notepadpp pandoc scrivener""",
    ("apple", "text"): """pages textedit iawriter libreoffice pdfexpert
        skim calibre nisus mellel bbedit pandoc ulysses""",
    ("linux", "text"): """libreoffice abiword evince okular calibre pandoc
        vim emacs latexmk groff xpdf mupdf""",
    ("windows", "video"): """wmplayer vlc ffmpeg mediaplayerclassic handbrake
        premiere vegas avidemux virtualdub potplayer kmplayer davinci""",
    ("apple", "video"): """quicktime vlc ffmpeg finalcut imovie handbrake
        screenflow wondershare iina elmedia motion compressor""",
    ("linux", "video"): """vlc ffmpeg mpv mplayer handbrake pitivi
        kdenlive openshot shotcut celluloid xine totem""",
}

OSES = ["windows", "apple", "linux"]
TYPES = ["audio", "image", "text", "video"]

# Cross-platform workhorse applications.  The long-tail formats are renderable
# only through these, so coverage gaps in the tail are always fixable on any
# OS, and the support those fixes add drifts toward formats aligned with the
# workhorses (the second list entry by construction, never the first).
PUMP = {
    "audio": ["audacity", "vlc", "ffmpeg"],
    "image": ["gimp", "imagemagick", "inkscape"],
    "text": ["libreoffice", "calibre", "pandoc"],
    "video": ["vlc", "ffmpeg", "handbrake"],
}


def catalog(mtype):
    seen, cat = set(), []
    for os_ in OSES:
        for app in APPS[(os_, mtype)].split():
            if app not in seen:
                seen.add(app)
                cat.append(app)
    return cat


def main():
    rng = random.Random(20260815)
    OUT.mkdir(parents=True, exist_ok=True)
    for mtype in TYPES:
        formats = FORMATS[mtype].split()
        assert len(formats) == 50 and len(set(formats)) == 50, (mtype, len(formats))
        (OUT / f"formats_{mtype}.txt").write_text("\n".join(formats) + "\n")
        for os_ in OSES:
            apps = APPS[(os_, mtype)].split()
            assert len(apps) == len(set(apps))
            (OUT / f"apps_{os_}_{mtype}.txt").write_text("\n".join(apps) + "\n")
        cat = catalog(mtype)
        pump_cols = [cat.index(a) for a in PUMP[mtype]]
        grid = []
        for fi in range(len(formats)):
            if fi == 0:
                # The most popular format: every legacy tool reads it, but
                # none of the workhorses handle it.
                row = [0 if c in pump_cols else 1 for c in range(len(cat))]
            elif fi in (1, 2):
                # Workhorse-native formats: all the workhorses plus the same
                # slice of the legacy tools; the pair tracks each other and
                # only popularity separates them.
                nonpump = [c for c in range(len(cat)) if c not in pump_cols]
                keep = set(nonpump[::3])
                row = [1 if (c in pump_cols or c in keep) else 0
                       for c in range(len(cat))]
            elif fi < 10:
                # Mid-popularity formats: two workhorses plus broad legacy
                # support.
                row = [1 if rng.random() < 0.45 else 0 for _ in cat]
                for col in pump_cols:
                    row[col] = 0
                row[pump_cols[fi % len(pump_cols)]] = 1
                row[pump_cols[(fi + 1) % len(pump_cols)]] = 1
            elif fi < 30:
                # Niche formats: two workhorses each plus scattered legacy
                # tools.
                row = [1 if rng.random() < 0.25 else 0 for _ in cat]
                for col in pump_cols:
                    row[col] = 0
                row[pump_cols[fi % len(pump_cols)]] = 1
                row[pump_cols[(fi + 1) % len(pump_cols)]] = 1
            else:
                row = [0] * len(cat)
                for col in rng.sample(pump_cols, rng.randint(1, 2)):
                    row[col] = 1
            if sum(row) == 0:
                row[rng.randrange(len(cat))] = 1
            grid.append(row)
        # Keep every application useful: at least three head formats per
        # column.  Top-up hits go to the mid-popularity rows so the top three
        # formats keep their designed coverage.
        for col in range(len(cat)):
            head_hits = [fi for fi in range(10) if grid[fi][col]]
            while len(head_hits) < 3:
                fi = rng.randrange(3, 10)
                if not grid[fi][col]:
                    grid[fi][col] = 1
                    head_hits.append(fi)
        rows = [",".join(str(v) for v in row) for row in grid]
        (OUT / f"compat_{mtype}.csv").write_text("\n".join(rows) + "\n")
    print("wrote", OUT)


if __name__ == "__main__":
    main()
