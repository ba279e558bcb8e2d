#pragma once

// Small corpus builders shared by the tests.

#include <opspam/corpus.hpp>

namespace testutil {

inline opspam::Review mk_review(std::string id, std::string reviewer, std::string business,
                                std::string date, int rating, std::string content = "fine",
                                opspam::Flag flag = opspam::Flag::n, long useful = 0,
                                long cool = 0, long funny = 0) {
    opspam::Review r;
    r.review_id = std::move(id);
    r.reviewer_id = std::move(reviewer);
    r.business_id = std::move(business);
    r.date = *opspam::parse_date(date);
    r.content = std::move(content);
    r.rating = rating;
    r.flag = flag;
    r.useful_count = useful;
    r.cool_count = cool;
    r.funny_count = funny;
    return r;
}

inline opspam::Reviewer mk_reviewer(std::string id, std::string join, long friends = 0,
                                    long reviews = 0, long useful = 0, long cool = 0,
                                    long funny = 0, long tips = 0) {
    opspam::Reviewer r;
    r.reviewer_id = std::move(id);
    r.name = "name-" + r.reviewer_id;
    r.location = "Springfield";
    r.join_date = *opspam::parse_date(join);
    r.friend_count = friends;
    r.review_count = reviews;
    r.useful_count = useful;
    r.cool_count = cool;
    r.funny_count = funny;
    r.tip_count = tips;
    return r;
}

inline opspam::Business mk_business(std::string id,
                                    opspam::BusinessKind kind = opspam::BusinessKind::restaurant,
                                    double site = 4.0, long reviews = 10) {
    opspam::Business b;
    b.business_id = std::move(id);
    b.kind = kind;
    b.name = "biz-" + b.business_id;
    b.location = "Springfield";
    b.review_count = reviews;
    b.site_rating = site;
    return b;
}

}  // namespace testutil
