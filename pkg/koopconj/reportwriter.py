#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

import html
import os


class Report(object):
    def __init__(self, results_dir):
        self.results_dir = results_dir
        self.fn = os.path.join(results_dir, 'results.html')
        self.write_head_html()

    def write_line(self, line):
        with open(self.fn, 'a') as f:
            f.write('%s\n' % line)

    def write_table(self, header, rows):
        self.write_line('<table>')
        self.write_line('<tr>%s</tr>' % ''.join('<th>%s</th>' % html.escape(str(h)) for h in header))
        for row in rows:
            self.write_line('<tr>%s</tr>' % ''.join('<td>%s</td>' % html.escape(str(c)) for c in row))
        self.write_line('</table>')

    def write_head_html(self):
        with open(self.fn, 'w') as f:
            f.write("""\
<!DOCTYPE html>
<html lang="en">
<head>
    <title>Koopman-Conjugacy - Results</title>
    <meta charset="utf-8" />
    <style type="text/css">
        body { font-family: Helvetica, Arial, sans-serif; font-size: 12px; margin: 8px 16px; }
        h1 { font-size: 17px; border-bottom: 2px solid #336699; padding: 2px 0; }
        h2 { font-size: 14px; color: #336699; margin: 1.8em 0 .6em; }
        h3 { font-size: 12px; margin: 1.2em 0 .4em; }
        table { border-collapse: collapse; margin: 0 0 1em 12px; }
        th { border-bottom: 1px solid #999999; padding: 2px 12px; }
        td { font-family: Menlo, Consolas, monospace; text-align: right; padding: 1px 12px; }
        tr:nth-child(even) td { background: #F2F5F8; }
        div.summary { margin-left: 12px; line-height: 1.5; }
    </style>
</head>
<body>
""")

    def write_closing_html(self):
        with open(self.fn, 'a') as f:
            f.write("""\
</body>
</html>
""")
