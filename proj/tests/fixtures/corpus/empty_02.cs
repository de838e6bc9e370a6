using Xunit;

namespace Fixtures.Empty;

public class CommentedOutTests
{
    [Fact]
    public void WasCommentedOut()
    {
        // var sut = new Parser();
        // Assert.NotNull(sut.Parse(text));
    }
}

public class StrayEmptyStatementTests
{
    [Fact]
    public void OnlyASemicolon()
    {
        /* left behind */ ;
    }
}
