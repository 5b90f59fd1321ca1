"""Regenerates sentiment_oracle.tsv with the reference vaderSentiment package.

    pip install vaderSentiment==3.3.2
    python3 make_sentiment_oracle.py

Also writes restaurant_chat.tsv from the messages in the CLI example session.
"""
import json
import pathlib

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

SENTENCES = [
    "VADER is smart, handsome, and funny.",
    "VADER is smart, handsome, and funny!",
    "VADER is very smart, handsome, and funny.",
    "VADER is VERY SMART, handsome, and FUNNY.",
    "VADER is VERY SMART, handsome, and FUNNY!!!",
    "VADER is VERY SMART, uber handsome, and FRIGGIN FUNNY!!!",
    "VADER is not smart, handsome, nor funny.",
    "The book was good.",
    "At least it isn't a horrible book.",
    "The book was only kind of good.",
    "The plot was good, but the characters are uncompelling and the dialog is not great.",
    "Today SUX!",
    "Today only kinda sux! But I'll get by, lol",
    "Not bad at all",
    "Sentiment analysis has never been good.",
    "Sentiment analysis has never been this good!",
    "Other sentiment analysis tools can be quite bad.",
    "On the other hand, VADER is quite bad ass",
    "VADER is such a badass!",
    "Without a doubt, excellent idea.",
    "Roger Dodger is one of the most compelling variations on this theme.",
    "Roger Dodger is at least compelling as a variation on the theme.",
    "Roger Dodger is one of the least compelling variations on this theme.",
    "Not such a badass after all.",
    "The food there is delicious and the staff are friendly.",
    "I love their vegan menu!",
    "It is way too expensive for a weekday dinner.",
    "The location is terrible, it takes forever to get there.",
    "Nice interior, cozy and warm.",
    "The kids area is great, my children would be happy.",
    "I am not sure, the reviews are mixed.",
    "Honestly the service was awful and rude.",
    "Sounds good to me.",
    "Meh, it is okay I guess.",
    "Their desserts are amazing!!!!",
    "I really hate waiting in long lines",
    "No problem with me, any place is fine.",
    "The portions are small but the taste is excellent.",
    "We had a wonderful time there last year :)",
    "It was boring and the music was too loud.",
    "I don't like the parking situation.",
    "Great price, great food, great people!",
    "That place is the bomb",
    "It's kind of far but worth it.",
    "I'm worried it will be crowded and noisy?",
    "Why would anyone go there??",
    "The soup was cold and the bread was stale.",
    "Fantastic view from the terrace, really beautiful.",
    "I wouldn't say it is bad, just average.",
    "Let's meet at seven.",
]

HERE = pathlib.Path(__file__).parent
SESSION = HERE / "../../../cli/examples/restaurant.session"
HEADER = "# text\tcompound (vaderSentiment 3.3.2)\n"

sia = SentimentIntensityAnalyzer()


def write(name, texts):
    lines = [f"{t}\t{sia.polarity_scores(t)['compound']:.4f}\n" for t in texts]
    (HERE / name).write_text(HEADER + "".join(lines))


write("sentiment_oracle.tsv", SENTENCES)
write("restaurant_chat.tsv", [m["text"] for m in json.loads(SESSION.read_text())["messages"]])
